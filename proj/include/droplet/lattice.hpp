#ifndef DROPLET_LATTICE_HPP
#define DROPLET_LATTICE_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "droplet/numerics.hpp"

// Crystal force matrix with an additive inerton correction, the lattice
// vibratory energy, and dispersion branches from the secular equation.
// One atomic species per cell; dim = 1, 2 or 3.

namespace droplet::lattice {

using Offset = std::array<int, 3>; // integer site offset l - n; unused axes 0
using Vec3 = std::array<double, 3>;

// dim x dim block with fixed stride-3 storage.
struct Block {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * 3 + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * 3 + j]; }

    static Block zero() { return {}; }
    static Block scaled_identity(int dim, double s);
    Block transposed(int dim) const;
    bool equals(const Block& o, int dim) const;
};

// Returns the correction matrix for a wave vector; must be symmetric.
using InertonCorrection = std::function<Block(const Vec3& k)>;

struct LatticeSpec {
    int dim = 1;
    double M = 0.0; // atom mass [kg]
    double a = 0.0; // lattice constant [m]
    // Elasticity blocks V(l - n) [N/m], reciprocal: V(-d) = V(d)^T.
    std::vector<std::pair<Offset, Block>> stencil;
    std::array<double, 3> charges{}; // e_alpha per component [C]
    InertonCorrection inerton_corr;  // empty => zero correction
};

// Inserts both d -> B and -d -> B^T so reciprocity holds by construction.
void add_coupling(LatticeSpec& spec, const Offset& d, const Block& b);
void validate(const LatticeSpec& spec);

// Monatomic chain with nearest-neighbor coupling C.
LatticeSpec nn_chain_1d(double M, double a, double C);

// eps * identity at every k.
InertonCorrection uniform_correction(double eps, int dim);

// Correction with the structure tau_inv * sum_a' tau_inv(k) * e_a'/e_beta
// built from a diagonal-isotropic inverse relaxation tensor; requires all
// charges nonzero and yields a symmetric matrix.
InertonCorrection inerton_charge_correction(
    const std::function<double(const Vec3&)>& tau_inv, std::array<double, 3> charges, int dim);

// Vibratory energy: L = 1/2 sum M xi_dot^2 - 1/2 sum_{l != n} xi_l V(l-n) xi_n.
// xi and xi_dot are row-major, sites.size() * dim long.
double lattice_energy(const LatticeSpec& spec, std::span<const Offset> sites,
                      std::span<const double> xi, std::span<const double> xi_dot);

// Fourier elastic matrix with acoustic normalization:
// Vt(k) = sum_d V(d) (1 - cos(a k.d)); Vt(0) = 0.
numerics::SymmetricMatrix fourier_force_matrix(const LatticeSpec& spec, const Vec3& k);

// W(k) = Vt(k) + inerton_corr(k).
numerics::SymmetricMatrix force_matrix(const LatticeSpec& spec, const Vec3& k);

struct DispersionResult {
    Vec3 k{};
    std::vector<double> branches; // Omega_s ascending [rad/s]
};

struct UnstableLatticeError : std::runtime_error {
    UnstableLatticeError(const std::string& msg, Vec3 k_, double eig)
        : std::runtime_error(msg), k(k_), eigenvalue(eig) {}
    Vec3 k;
    double eigenvalue;
};

// Branch frequencies from the secular equation of W(k)/M.
DispersionResult dispersion(const LatticeSpec& spec, const Vec3& k);

// Grid sweep; the OpenMP version and the serial reference produce identical
// results (per-k work is independent), which the tests assert.
std::vector<DispersionResult> dispersion_sweep(const LatticeSpec& spec,
                                               std::span<const Vec3> ks);
std::vector<DispersionResult> dispersion_sweep_serial(const LatticeSpec& spec,
                                                      std::span<const Vec3> ks);

} // namespace droplet::lattice

#endif
