#ifndef DROPLET_NUMERICS_HPP
#define DROPLET_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Generic numerical kernels shared by the physics modules. Everything here
// is deterministic and pure; the same inputs always give the same bits.

namespace droplet::numerics {

// ---------------------------------------------------------------------------
// Adaptive ODE integration (Dormand-Prince embedded 5(4) pair)
// ---------------------------------------------------------------------------

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeProblem {
    std::size_t dimension = 0;
    Rhs rhs;
    std::vector<double> initial_state;
    double t0 = 0.0;
    double t1 = 0.0;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> y; // y[i].size() == problem.dimension
};

struct OdeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrates `problem` and returns the solution at `sample_times` (sorted,
// inside [t0, t1]). Values between accepted steps come from the method's
// quartic continuous extension. `abs_tol` may be given per component.
Trajectory integrate(const OdeProblem& problem, double rel_tol, double abs_tol,
                     std::span<const double> sample_times, double max_step = 0.0);
Trajectory integrate(const OdeProblem& problem, double rel_tol,
                     std::span<const double> abs_tol,
                     std::span<const double> sample_times, double max_step = 0.0);

// ---------------------------------------------------------------------------
// Adaptive quadrature (Simpson with Richardson extrapolation)
// ---------------------------------------------------------------------------

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& msg, double best)
        : std::runtime_error(msg), best_estimate(best) {}
    double best_estimate;
};

double quad(const std::function<double(double)>& f, double lo, double hi, double rel_tol);

// ---------------------------------------------------------------------------
// 1-D stationary points
// ---------------------------------------------------------------------------

enum class ExtremumKind { minimum, maximum, saddle };

const char* to_string(ExtremumKind k);

struct StationaryPoint {
    double x = 0.0;
    ExtremumKind kind = ExtremumKind::saddle;
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Locates a sign change of f' on [lo, hi] (central differences), bisects it
// down to a relative width of `tol`, and classifies the point by the sign of
// the second difference. Throws BracketError with the scanned sign pattern
// when f' does not change sign.
StationaryPoint stationary_point(const std::function<double(double)>& f, double lo,
                                 double hi, double tol);

// Central finite differences, order 1 or 2.
double fd_derivative(const std::function<double(double)>& f, double x, int order);

// ---------------------------------------------------------------------------
// Small dense symmetric eigenproblems (cyclic Jacobi)
// ---------------------------------------------------------------------------

// Packed lower-triangle storage, so entries(i,j) == entries(j,i) holds by
// construction rather than by discipline.
class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(std::size_t order);

    std::size_t order() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[index(i, j)]; }
    void set(std::size_t i, std::size_t j, double v) { a_[index(i, j)] = v; }

    double frobenius_norm() const;

    friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

  private:
    std::size_t index(std::size_t i, std::size_t j) const;
    std::size_t n_;
    std::vector<double> a_;
};

struct EigResult {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // vectors[s] pairs with values[s]
};

EigResult eig_sym(const SymmetricMatrix& m);

} // namespace droplet::numerics

#endif
