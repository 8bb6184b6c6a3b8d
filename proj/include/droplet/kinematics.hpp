#ifndef DROPLET_KINEMATICS_HPP
#define DROPLET_KINEMATICS_HPP

#include <span>

#include "droplet/numerics.hpp"

// Particle-inerton dynamics: the de Broglie/amplitude relations, the coupled
// particle-cloud chain, its smooth closed-form solution and the published
// rectified branch. A moving particle of mass m and speed v drags an inerton
// cloud of mass mu = m (v/c)^2, so sqrt(m/mu) = c/v holds identically.

namespace droplet::kinematics {

struct FreeParticle {
    double m = 0.0;        // [kg]
    double v = 0.0;        // [m/s]
    double lambda = 0.0;   // de Broglie wavelength [m]
    double Lambda = 0.0;   // inerton cloud amplitude [m]
    double T_period = 0.0; // particle-cloud collision period [s]
    double nu = 0.0;       // 1 / (2 T) [1/s]
    double E = 0.0;        // h nu [J]
};

FreeParticle free_particle(double m, double v);

// lambda = h / (m v)
double de_broglie(double m, double v);
// Lambda = lambda c / v
double inerton_amplitude(double lambda, double v);
// T = lambda / v; identical to Lambda / c
double free_period(const FreeParticle& p);

struct CoupledScales {
    double lambda_l = 0.0; // v pi / Omega [m]
    double Lambda_l = 0.0; // c pi / Omega [m]
    double Omega = 0.0;    // sqrt(omega^2 + omega_tilde^2) [rad/s]
};

CoupledScales coupled_amplitudes(double v, double omega, double omega_tilde);

struct ChainParams {
    double m = 0.0;           // particle mass [kg]
    double v = 0.0;           // initial speed [m/s]
    double omega = 0.0;       // own-cloud collision frequency [rad/s]
    double omega_tilde = 0.0; // neighbor-cloud collision frequency [rad/s]
    double mu = 0.0;          // cloud mass, m (v/c)^2 [kg]
};

ChainParams chain_params(double m, double v, double omega, double omega_tilde);

// State layout used throughout: (x, x_dot, y, y_dot, y_next, y_next_dot).
inline constexpr std::size_t kChainDim = 6;

struct ChainState {
    double t = 0.0;
    double x = 0.0;
    double x_dot = 0.0;
    double y = 0.0;
    double y_dot = 0.0;
    double y_next = 0.0;
    double y_next_dot = 0.0;
};

// Equations of motion of the chain cell:
//   x''      =  sqrt(mu/m) (omega y' - omega_tilde y_next')
//   y''      = -sqrt(m/mu) omega x'
//   y_next'' = +sqrt(m/mu) omega_tilde x'
void chain_rhs(const ChainParams& p, std::span<const double> state, std::span<double> deriv);
ChainState chain_rhs(const ChainParams& p, const ChainState& s); // returns derivatives

// The chain as an ODE problem with the canonical initial conditions
// x = y = y_next = 0, y' = y_next' = 0, x' = v.
numerics::OdeProblem chain_ode(const ChainParams& p, double t1);

// Closed-form solution of the linear system (smooth branch).
ChainState smooth_trajectory(const ChainParams& p, double t);

struct PaperBranch {
    double x = 0.0;      // (lambda_l/pi) (-1)^floor(t/T_l) sin(Omega t)
    double x_dot = 0.0;  // v |cos(Omega t)|
    double y_diff = 0.0; // (omega/Omega)(Lambda_l/pi) [(-1)^floor(t/T_l) cos(Omega t) - 1]
};

// Published rectified branch; T_l = pi / Omega so lambda_l = v T_l.
PaperBranch paper_trajectory(const ChainParams& p, double t);

// Residual between the published y-difference and the smooth one. The
// published coefficient carries omega/Omega where the smooth difference
// carries (omega + omega_tilde)/Omega, so the gap is
// (c omega_tilde / Omega^2)(1 - cos(Omega t)) on the first half-period and
// vanishes identically when omega_tilde = 0. Reported, not reconciled.
double paper_smooth_y_gap(const ChainParams& p, double t);

} // namespace droplet::kinematics

#endif
