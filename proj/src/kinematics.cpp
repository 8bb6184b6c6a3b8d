#include "droplet/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "droplet/quantities.hpp"

namespace droplet::kinematics {

namespace {
constexpr double kC = quantities::constants().c;
constexpr double kH = quantities::constants().h;
constexpr double kPi = std::numbers::pi;

void check_speed(double v) {
    if (!(v > 0.0)) throw std::domain_error("speed must be > 0");
    if (v > kC) throw std::domain_error("speed must not exceed c");
}
} // namespace

double de_broglie(double m, double v) {
    if (!(m > 0.0)) throw std::domain_error("mass must be > 0");
    check_speed(v);
    return kH / (m * v);
}

double inerton_amplitude(double lambda, double v) {
    if (!(lambda > 0.0)) throw std::domain_error("wavelength must be > 0");
    check_speed(v);
    return lambda * kC / v;
}

FreeParticle free_particle(double m, double v) {
    FreeParticle p;
    p.m = m;
    p.v = v;
    p.lambda = de_broglie(m, v);
    p.Lambda = inerton_amplitude(p.lambda, v);
    p.T_period = p.lambda / v;
    p.nu = 1.0 / (2.0 * p.T_period);
    p.E = kH * p.nu;
    return p;
}

double free_period(const FreeParticle& p) {
    const double T = p.lambda / p.v;
    const double T_cloud = p.Lambda / kC;
    if (std::abs(T - T_cloud) > 1e-12 * T)
        throw std::domain_error("free_period: lambda/v and Lambda/c disagree");
    return T;
}

CoupledScales coupled_amplitudes(double v, double omega, double omega_tilde) {
    check_speed(v);
    if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
    if (!(omega_tilde >= 0.0)) throw std::domain_error("omega_tilde must be >= 0");
    CoupledScales s;
    s.Omega = std::hypot(omega, omega_tilde);
    s.lambda_l = v * kPi / s.Omega;
    s.Lambda_l = kC * kPi / s.Omega;
    return s;
}

ChainParams chain_params(double m, double v, double omega, double omega_tilde) {
    if (!(m > 0.0)) throw std::domain_error("mass must be > 0");
    check_speed(v);
    if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
    if (!(omega_tilde >= 0.0)) throw std::domain_error("omega_tilde must be >= 0");
    ChainParams p;
    p.m = m;
    p.v = v;
    p.omega = omega;
    p.omega_tilde = omega_tilde;
    p.mu = m * (v / kC) * (v / kC);
    return p;
}

void chain_rhs(const ChainParams& p, std::span<const double> state, std::span<double> deriv) {
    if (state.size() != kChainDim || deriv.size() != kChainDim)
        throw std::domain_error("chain_rhs: state must have 6 components");
    const double ratio = p.v / kC;     // sqrt(mu/m)
    const double inv_ratio = kC / p.v; // sqrt(m/mu)
    const double x_dot = state[1];
    const double y_dot = state[3];
    const double y_next_dot = state[5];
    deriv[0] = x_dot;
    deriv[1] = ratio * (p.omega * y_dot - p.omega_tilde * y_next_dot);
    deriv[2] = y_dot;
    deriv[3] = -inv_ratio * p.omega * x_dot;
    deriv[4] = y_next_dot;
    deriv[5] = inv_ratio * p.omega_tilde * x_dot;
}

ChainState chain_rhs(const ChainParams& p, const ChainState& s) {
    const double state[kChainDim] = {s.x, s.x_dot, s.y, s.y_dot, s.y_next, s.y_next_dot};
    double deriv[kChainDim];
    chain_rhs(p, state, deriv);
    ChainState d;
    d.t = s.t;
    d.x = deriv[0];
    d.x_dot = deriv[1];
    d.y = deriv[2];
    d.y_dot = deriv[3];
    d.y_next = deriv[4];
    d.y_next_dot = deriv[5];
    return d;
}

numerics::OdeProblem chain_ode(const ChainParams& p, double t1) {
    numerics::OdeProblem prob;
    prob.dimension = kChainDim;
    prob.rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        chain_rhs(p, y, dy);
    };
    prob.initial_state = {0.0, p.v, 0.0, 0.0, 0.0, 0.0};
    prob.t0 = 0.0;
    prob.t1 = t1;
    return prob;
}

ChainState smooth_trajectory(const ChainParams& p, double t) {
    if (!(t >= 0.0)) throw std::domain_error("smooth_trajectory: t must be >= 0");
    const double Omega = std::hypot(p.omega, p.omega_tilde);
    const double s = std::sin(Omega * t);
    const double cshift = 1.0 - std::cos(Omega * t);
    ChainState st;
    st.t = t;
    st.x = p.v / Omega * s;
    st.x_dot = p.v * std::cos(Omega * t);
    st.y = -(kC / Omega) * (p.omega / Omega) * cshift;
    st.y_dot = -(kC * p.omega / Omega) * s;
    st.y_next = (kC / Omega) * (p.omega_tilde / Omega) * cshift;
    st.y_next_dot = (kC * p.omega_tilde / Omega) * s;
    return st;
}

PaperBranch paper_trajectory(const ChainParams& p, double t) {
    if (!(t >= 0.0)) throw std::domain_error("paper_trajectory: t must be >= 0");
    const CoupledScales sc = coupled_amplitudes(p.v, p.omega, p.omega_tilde);
    const double T_l = kPi / sc.Omega;
    const long long half_periods = static_cast<long long>(std::floor(t / T_l));
    const double sign = (half_periods % 2 == 0) ? 1.0 : -1.0;
    const double c = std::cos(sc.Omega * t);
    PaperBranch b;
    b.x = sc.lambda_l / kPi * sign * std::sin(sc.Omega * t);
    b.x_dot = p.v * std::abs(c);
    b.y_diff = (p.omega / sc.Omega) * (sc.Lambda_l / kPi) * (sign * c - 1.0);
    return b;
}

double paper_smooth_y_gap(const ChainParams& p, double t) {
    const ChainState s = smooth_trajectory(p, t);
    const PaperBranch b = paper_trajectory(p, t);
    return b.y_diff - (s.y - s.y_next);
}

} // namespace droplet::kinematics
