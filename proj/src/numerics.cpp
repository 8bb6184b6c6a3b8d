#include "droplet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace droplet::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b5 - b4, used for the embedded error estimate.
constexpr double kErr[7] = {71.0 / 57600,     0.0,          -71.0 / 16695, 71.0 / 1920,
                            -17253.0 / 339200, 22.0 / 525,  -1.0 / 40};
// Coefficients of the quartic continuous extension.
constexpr double kD[7] = {-12715105075.0 / 11282082432.0,
                          0.0,
                          87487479700.0 / 32700410799.0,
                          -10690763975.0 / 1880347072.0,
                          701980252875.0 / 199316789632.0,
                          -1453857185.0 / 822651844.0,
                          69997945.0 / 29380423.0};

struct DenseStep {
    // P(theta) = c1 + theta*(c2 + (1-theta)*(c3 + theta*(c4 + (1-theta)*c5)))
    std::vector<double> c1, c2, c3, c4, c5;

    void build(std::span<const double> y0, std::span<const double> y1,
               const std::vector<std::vector<double>>& k, double h) {
        const std::size_t n = y0.size();
        c1.assign(y0.begin(), y0.end());
        c2.resize(n);
        c3.resize(n);
        c4.resize(n);
        c5.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y0[i];
            const double bspl = h * k[0][i] - ydiff;
            c2[i] = ydiff;
            c3[i] = bspl;
            c4[i] = ydiff - h * k[6][i] - bspl;
            double acc = 0.0;
            for (int s = 0; s < 7; ++s) acc += kD[s] * k[s][i];
            c5[i] = h * acc;
        }
    }

    void eval(double theta, std::span<double> out) const {
        const double theta1 = 1.0 - theta;
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = c1[i] +
                     theta * (c2[i] + theta1 * (c3[i] + theta * (c4[i] + theta1 * c5[i])));
        }
    }
};

void validate_problem(const OdeProblem& p, std::span<const double> samples) {
    if (p.dimension == 0 || !p.rhs) throw std::invalid_argument("integrate: empty problem");
    if (p.initial_state.size() != p.dimension)
        throw std::invalid_argument("integrate: initial state size mismatch");
    if (!(p.t1 > p.t0)) throw std::invalid_argument("integrate: need t1 > t0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < p.t0 || samples[i] > p.t1)
            throw std::invalid_argument("integrate: sample time outside [t0, t1]");
        if (i > 0 && samples[i] < samples[i - 1])
            throw std::invalid_argument("integrate: sample times must be sorted");
    }
}

Trajectory integrate_impl(const OdeProblem& p, double rel_tol,
                          std::span<const double> abs_tol,
                          std::span<const double> samples, double max_step) {
    validate_problem(p, samples);
    if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate: rel_tol must be > 0");
    for (double a : abs_tol)
        if (!(a >= 0.0)) throw std::invalid_argument("integrate: abs_tol must be >= 0");

    const std::size_t n = p.dimension;
    std::vector<std::vector<double>> k(7, std::vector<double>(n));
    std::vector<double> y(p.initial_state);
    std::vector<double> ynew(n), ystage(n), yerr(n);
    DenseStep dense;

    Trajectory out;
    out.t.reserve(samples.size());
    out.y.reserve(samples.size());
    std::size_t cursor = 0;
    while (cursor < samples.size() && samples[cursor] <= p.t0) {
        out.t.push_back(samples[cursor]);
        out.y.push_back(y);
        ++cursor;
    }

    double t = p.t0;
    const double span = p.t1 - p.t0;
    double h = span / 100.0;
    if (max_step > 0.0) h = std::min(h, max_step);

    p.rhs(t, y, k[0]); // FSAL seed
    bool first_same_as_last = true;

    const auto tol_of = [&](std::size_t i, double yi, double yni) {
        const double a = abs_tol.size() == 1 ? abs_tol[0] : abs_tol[i];
        return a + rel_tol * std::max(std::abs(yi), std::abs(yni));
    };

    long rejected_in_a_row = 0;
    while (t < p.t1) {
        h = std::min(h, p.t1 - t);
        const double hmin =
            1e3 * kEps * std::max({std::abs(t), std::abs(p.t0), std::abs(p.t1)});
        if (h < hmin) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "integrate: step size underflow at t=%.17g (h=%.17g); "
                          "rhs looks stiff or singular",
                          t, h);
            throw OdeError(buf);
        }

        if (!first_same_as_last) p.rhs(t, y, k[0]);
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
                ystage[i] = y[i] + h * acc;
            }
            p.rhs(t + kC[s] * h, ystage, k[s]);
        }
        // stage 7 state equals the 5th-order solution
        for (std::size_t i = 0; i < n; ++i) ynew[i] = ystage[i];

        double err_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int s = 0; s < 7; ++s) acc += kErr[s] * k[s][i];
            yerr[i] = h * acc;
            const double sc = tol_of(i, y[i], ynew[i]);
            const double r = sc > 0.0 ? yerr[i] / sc : 0.0;
            err_sq += r * r;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        if (err <= 1.0) {
            rejected_in_a_row = 0;
            dense.build(y, ynew, k, h);
            const double tnew = t + h;
            while (cursor < samples.size() && samples[cursor] <= tnew + 1e-12 * std::abs(tnew)) {
                const double theta = std::clamp((samples[cursor] - t) / h, 0.0, 1.0);
                out.t.push_back(samples[cursor]);
                out.y.emplace_back(n);
                dense.eval(theta, out.y.back());
                ++cursor;
            }
            std::swap(y, ynew);
            std::swap(k[0], k[6]); // FSAL
            first_same_as_last = true;
            t = tnew;
            double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            if (max_step > 0.0) h = std::min(h, max_step);
        } else {
            if (++rejected_in_a_row > 60) {
                throw OdeError("integrate: repeated step rejection; rhs looks stiff or singular");
            }
            first_same_as_last = false;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
        }
    }
    // any samples pinned exactly to t1 that the loop's tolerance missed
    while (cursor < samples.size()) {
        out.t.push_back(samples[cursor]);
        out.y.push_back(y);
        ++cursor;
    }
    return out;
}

} // namespace

Trajectory integrate(const OdeProblem& problem, double rel_tol, double abs_tol,
                     std::span<const double> sample_times, double max_step) {
    const double a[1] = {abs_tol};
    return integrate_impl(problem, rel_tol, a, sample_times, max_step);
}

Trajectory integrate(const OdeProblem& problem, double rel_tol,
                     std::span<const double> abs_tol,
                     std::span<const double> sample_times, double max_step) {
    if (abs_tol.size() != problem.dimension && abs_tol.size() != 1)
        throw std::invalid_argument("integrate: abs_tol size mismatch");
    return integrate_impl(problem, rel_tol, abs_tol, sample_times, max_step);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

struct QuadState {
    const std::function<double(double)>* f;
    long evals = 0;
    bool converged = true;

    double eval(double x) {
        ++evals;
        const double v = (*f)(x);
        if (!std::isfinite(v)) throw std::domain_error("quad: integrand not finite");
        return v;
    }
};

double adapt(QuadState& st, double a, double b, double fa, double fm, double fb, double whole,
             double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.eval(lm);
    const double frm = st.eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || (b - a) < kEps * (std::abs(a) + std::abs(b))) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        st.converged = false;
        return left + right + delta / 15.0;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

} // namespace

double quad(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("quad: rel_tol must be > 0");
    if (!(lo <= hi)) throw std::invalid_argument("quad: need lo <= hi");
    if (lo == hi) return 0.0;

    QuadState st{&f};

    // Coarse composite pass to size the absolute error budget.
    constexpr int kPanels = 32;
    const double hstep = (hi - lo) / kPanels;
    double coarse = 0.0, coarse_abs = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double a = lo + i * hstep;
        const double b = a + hstep;
        const double s = hstep / 6.0 *
                         (st.eval(a) + 4.0 * st.eval(0.5 * (a + b)) + st.eval(b));
        coarse += s;
        coarse_abs += std::abs(s);
    }
    const double scale = std::max(std::abs(coarse), 1e-3 * coarse_abs);
    const double eps = rel_tol * scale + 1e-300;

    const double fa = st.eval(lo);
    const double fb = st.eval(hi);
    const double fm = st.eval(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    const double result = adapt(st, lo, hi, fa, fm, fb, whole, eps, 60);
    if (!st.converged) {
        throw QuadratureError("quad: max subdivision depth reached before meeting tolerance",
                              result);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Stationary points and finite differences
// ---------------------------------------------------------------------------

const char* to_string(ExtremumKind k) {
    switch (k) {
        case ExtremumKind::minimum: return "min";
        case ExtremumKind::maximum: return "max";
        case ExtremumKind::saddle: return "saddle";
    }
    return "?";
}

double fd_derivative(const std::function<double(double)>& f, double x, int order) {
    const double scale = std::max(std::abs(x), 1.0);
    if (order == 1) {
        const double h = scale * std::cbrt(kEps);
        return (f(x + h) - f(x - h)) / (2.0 * h);
    }
    if (order == 2) {
        const double h = scale * std::pow(kEps, 0.25);
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    }
    throw std::invalid_argument("fd_derivative: order must be 1 or 2");
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

} // namespace

StationaryPoint stationary_point(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
    if (!(lo < hi)) throw std::invalid_argument("stationary_point: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("stationary_point: tol must be > 0");

    const auto deriv = [&](double x) { return fd_derivative(f, x, 1); };

    // Geometric scan when the bracket spans decades, linear otherwise.
    constexpr int kScan = 128;
    const bool log_scan = lo > 0.0 && hi / lo >= 1e3;
    std::vector<double> xs(kScan);
    for (int i = 0; i < kScan; ++i) {
        const double u = static_cast<double>(i) / (kScan - 1);
        xs[i] = log_scan ? lo * std::pow(hi / lo, u) : lo + u * (hi - lo);
    }

    double a = 0.0, b = 0.0;
    int sa = 0;
    bool found = false;
    std::string pattern;
    double prev_x = xs[0];
    int prev_s = sign_of(deriv(prev_x));
    pattern += prev_s > 0 ? '+' : (prev_s < 0 ? '-' : '0');
    double root_at = prev_x;
    bool exact_zero = prev_s == 0;
    for (int i = 1; i < kScan && !found && !exact_zero; ++i) {
        const int s = sign_of(deriv(xs[i]));
        pattern += s > 0 ? '+' : (s < 0 ? '-' : '0');
        if (s == 0) {
            exact_zero = true;
            root_at = xs[i];
            break;
        }
        if (prev_s != 0 && s != prev_s) {
            a = prev_x;
            b = xs[i];
            sa = prev_s;
            found = true;
            break;
        }
        prev_x = xs[i];
        prev_s = s;
    }

    double xstar;
    if (exact_zero) {
        xstar = root_at;
    } else if (found) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (b - a <= tol * std::max(1.0, std::abs(mid))) break;
            const int sm = sign_of(deriv(mid));
            if (sm == 0) {
                a = b = mid;
                break;
            }
            if (sm == sa) a = mid;
            else b = mid;
        }
        xstar = 0.5 * (a + b);
    } else {
        throw BracketError("stationary_point: no sign change of f' in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) +
                           "]; scanned sign pattern: " + pattern);
    }

    // Classify by the second difference against a roundoff floor.
    const double scale = std::max(std::abs(xstar), 1.0);
    const double h2 = scale * std::pow(kEps, 0.25);
    const double f0 = f(xstar), fp = f(xstar + h2), fm = f(xstar - h2);
    const double second = (fp - 2.0 * f0 + fm) / (h2 * h2);
    const double fscale = std::max({std::abs(f0), std::abs(fp), std::abs(fm)});
    const double noise_floor = 8.0 * kEps * fscale / (h2 * h2);
    ExtremumKind kind = ExtremumKind::saddle;
    if (std::abs(second) > noise_floor) {
        kind = second > 0.0 ? ExtremumKind::minimum : ExtremumKind::maximum;
    }
    return {xstar, kind};
}

// ---------------------------------------------------------------------------
// Symmetric eigen decomposition
// ---------------------------------------------------------------------------

SymmetricMatrix::SymmetricMatrix(std::size_t order)
    : n_(order), a_(order * (order + 1) / 2, 0.0) {
    if (order == 0) throw std::invalid_argument("SymmetricMatrix: order must be >= 1");
}

std::size_t SymmetricMatrix::index(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("SymmetricMatrix: index");
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
}

double SymmetricMatrix::frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            s += v * v;
        }
    return std::sqrt(s);
}

EigResult eig_sym(const SymmetricMatrix& m) {
    const std::size_t n = m.order();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        v[i][i] = 1.0;
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    }

    const double threshold = 1e-12 * m.frobenius_norm();
    const auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i][j] * a[i][j];
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 200 && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                // Negligibly small relative to the diagonal: rotation would be
                // pure roundoff, so zero it directly.
                const double g = 100.0 * std::abs(apq);
                if (std::abs(a[p][p]) + g == std::abs(a[p][p]) &&
                    std::abs(a[q][q]) + g == std::abs(a[q][q])) {
                    a[p][q] = a[q][p] = 0.0;
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                double tpar = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) tpar = -tpar;
                const double c = 1.0 / std::sqrt(tpar * tpar + 1.0);
                const double s = tpar * c;
                const double tau = s / (1.0 + c);
                const double hh = tpar * apq;
                a[p][p] -= hh;
                a[q][q] += hh;
                a[p][q] = a[q][p] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        const double aip = a[i][p];
                        const double aiq = a[i][q];
                        a[i][p] = a[p][i] = aip - s * (aiq + aip * tau);
                        a[i][q] = a[q][i] = aiq + s * (aip - aiq * tau);
                    }
                    const double vip = v[i][p];
                    const double viq = v[i][q];
                    v[i][p] = vip - s * (viq + vip * tau);
                    v[i][q] = viq + s * (vip - viq * tau);
                }
            }
        }
    }
    if (off_norm() > threshold) {
        throw std::runtime_error("eig_sym: Jacobi sweeps failed to converge");
    }

    std::vector<std::size_t> ord(n);
    for (std::size_t i = 0; i < n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });

    EigResult r;
    r.values.resize(n);
    r.vectors.assign(n, std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s) {
        r.values[s] = a[ord[s]][ord[s]];
        for (std::size_t i = 0; i < n; ++i) r.vectors[s][i] = v[i][ord[s]];
    }
    return r;
}

} // namespace droplet::numerics
