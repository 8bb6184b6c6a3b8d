#include "droplet/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace droplet::lattice {

namespace {

bool offsets_equal(const Offset& a, const Offset& b) {
    return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
}

Offset negated(const Offset& d) { return Offset{-d[0], -d[1], -d[2]}; }

bool offset_in_dim(const Offset& d, int dim) {
    for (int i = dim; i < 3; ++i)
        if (d[i] != 0) return false;
    return true;
}

const Block* find_block(const LatticeSpec& spec, const Offset& d) {
    for (const auto& [off, b] : spec.stencil)
        if (offsets_equal(off, d)) return &b;
    return nullptr;
}

} // namespace

Block Block::scaled_identity(int dim, double s) {
    Block b;
    for (int i = 0; i < dim; ++i) b(i, i) = s;
    return b;
}

Block Block::transposed(int dim) const {
    Block t;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) t(i, j) = (*this)(j, i);
    return t;
}

bool Block::equals(const Block& o, int dim) const {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if ((*this)(i, j) != o(i, j)) return false;
    return true;
}

void add_coupling(LatticeSpec& spec, const Offset& d, const Block& b) {
    if (offsets_equal(d, Offset{0, 0, 0}))
        throw std::domain_error("add_coupling: zero offset is excluded (l != n)");
    if (!offset_in_dim(d, spec.dim))
        throw std::domain_error("add_coupling: offset uses axes beyond spec.dim");
    for (auto& [off, blk] : spec.stencil) {
        if (offsets_equal(off, d)) {
            blk = b;
        } else if (offsets_equal(off, negated(d))) {
            blk = b.transposed(spec.dim);
        }
    }
    if (!find_block(spec, d)) spec.stencil.emplace_back(d, b);
    if (!find_block(spec, negated(d)))
        spec.stencil.emplace_back(negated(d), b.transposed(spec.dim));
}

void validate(const LatticeSpec& spec) {
    if (spec.dim < 1 || spec.dim > 3) throw std::domain_error("lattice: dim must be 1, 2 or 3");
    if (!(spec.M > 0.0)) throw std::domain_error("lattice: atom mass must be > 0");
    if (!(spec.a > 0.0)) throw std::domain_error("lattice: lattice constant must be > 0");
    for (const auto& [d, b] : spec.stencil) {
        if (offsets_equal(d, Offset{0, 0, 0}))
            throw std::domain_error("lattice: stencil must not contain the zero offset");
        if (!offset_in_dim(d, spec.dim))
            throw std::domain_error("lattice: stencil offset uses axes beyond dim");
        const Block* rb = find_block(spec, negated(d));
        if (!rb || !rb->equals(b.transposed(spec.dim), spec.dim))
            throw std::domain_error("lattice: stencil violates reciprocity V(-d) = V(d)^T");
    }
}

LatticeSpec nn_chain_1d(double M, double a, double C) {
    LatticeSpec spec;
    spec.dim = 1;
    spec.M = M;
    spec.a = a;
    Block b;
    b(0, 0) = C;
    add_coupling(spec, Offset{1, 0, 0}, b);
    validate(spec);
    return spec;
}

InertonCorrection uniform_correction(double eps, int dim) {
    return [eps, dim](const Vec3&) { return Block::scaled_identity(dim, eps); };
}

InertonCorrection inerton_charge_correction(
    const std::function<double(const Vec3&)>& tau_inv, std::array<double, 3> charges, int dim) {
    for (int i = 0; i < dim; ++i)
        if (charges[i] == 0.0)
            throw std::domain_error("inerton_charge_correction: charges must be nonzero");
    return [tau_inv, charges, dim](const Vec3& k) {
        const double t = tau_inv(k);
        Block b;
        // Diagonal-isotropic tau: the alpha' sum collapses onto the diagonal
        // and the charge ratio cancels, leaving t^2 on each component.
        for (int i = 0; i < dim; ++i) b(i, i) = t * t * (charges[i] / charges[i]);
        return b;
    };
}

double lattice_energy(const LatticeSpec& spec, std::span<const Offset> sites,
                      std::span<const double> xi, std::span<const double> xi_dot) {
    validate(spec);
    const std::size_t n = sites.size();
    const std::size_t dim = static_cast<std::size_t>(spec.dim);
    if (xi.size() != n * dim || xi_dot.size() != n * dim)
        throw std::domain_error("lattice_energy: displacement arrays must be sites*dim long");

    double kinetic = 0.0;
    for (double vdot : xi_dot) kinetic += vdot * vdot;
    kinetic *= 0.5 * spec.M;

    double potential = 0.0; // the primed double sum, l != n
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
            if (l == m) continue;
            const Offset d{sites[l][0] - sites[m][0], sites[l][1] - sites[m][1],
                           sites[l][2] - sites[m][2]};
            const Block* b = find_block(spec, d);
            if (!b) continue;
            for (std::size_t al = 0; al < dim; ++al)
                for (std::size_t be = 0; be < dim; ++be)
                    potential += (*b)(static_cast<int>(al), static_cast<int>(be)) *
                                 xi[l * dim + al] * xi[m * dim + be];
        }
    }
    return kinetic - 0.5 * potential;
}

numerics::SymmetricMatrix fourier_force_matrix(const LatticeSpec& spec, const Vec3& k) {
    validate(spec);
    const double bz = std::numbers::pi / spec.a;
    for (int i = 0; i < spec.dim; ++i)
        if (std::abs(k[i]) > bz * (1.0 + 1e-9))
            throw std::domain_error("fourier_force_matrix: k outside the first Brillouin zone");

    numerics::SymmetricMatrix vt(static_cast<std::size_t>(spec.dim));
    for (int i = 0; i < spec.dim; ++i)
        for (int j = i; j < spec.dim; ++j) {
            double acc = 0.0;
            for (const auto& [d, b] : spec.stencil) {
                double phase = 0.0;
                for (int ax = 0; ax < spec.dim; ++ax) phase += k[ax] * d[ax];
                acc += b(i, j) * (1.0 - std::cos(spec.a * phase));
            }
            vt.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), acc);
        }
    return vt;
}

numerics::SymmetricMatrix force_matrix(const LatticeSpec& spec, const Vec3& k) {
    numerics::SymmetricMatrix w = fourier_force_matrix(spec, k);
    if (!spec.inerton_corr) return w;
    const Block corr = spec.inerton_corr(k);
    double scale = 0.0;
    for (int i = 0; i < spec.dim; ++i)
        for (int j = 0; j < spec.dim; ++j) scale = std::max(scale, std::abs(corr(i, j)));
    for (int i = 0; i < spec.dim; ++i)
        for (int j = i; j < spec.dim; ++j) {
            if (std::abs(corr(i, j) - corr(j, i)) > 1e-12 * std::max(scale, 1e-300))
                throw std::domain_error("force_matrix: inerton correction is not symmetric");
            w.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                  w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) + corr(i, j));
        }
    return w;
}

DispersionResult dispersion(const LatticeSpec& spec, const Vec3& k) {
    const numerics::SymmetricMatrix w = force_matrix(spec, k);
    numerics::SymmetricMatrix d(w.order());
    for (std::size_t i = 0; i < w.order(); ++i)
        for (std::size_t j = i; j < w.order(); ++j) d.set(i, j, w(i, j) / spec.M);

    const numerics::EigResult eig = numerics::eig_sym(d);
    double scale = 0.0;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));

    DispersionResult r;
    r.k = k;
    r.branches.reserve(eig.values.size());
    for (double v : eig.values) {
        if (v < -1e-12 * std::max(scale, 1e-300)) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "dispersion: unstable lattice, Omega^2 = %.6g at k = (%g, %g, %g)", v,
                          k[0], k[1], k[2]);
            throw UnstableLatticeError(buf, k, v);
        }
        r.branches.push_back(std::sqrt(std::max(v, 0.0)));
    }
    return r;
}

std::vector<DispersionResult> dispersion_sweep_serial(const LatticeSpec& spec,
                                                      std::span<const Vec3> ks) {
    std::vector<DispersionResult> out(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) out[i] = dispersion(spec, ks[i]);
    return out;
}

std::vector<DispersionResult> dispersion_sweep(const LatticeSpec& spec,
                                               std::span<const Vec3> ks) {
    std::vector<DispersionResult> out(ks.size());
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ks.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = dispersion(spec, ks[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace droplet::lattice
