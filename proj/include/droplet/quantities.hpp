#ifndef DROPLET_QUANTITIES_HPP
#define DROPLET_QUANTITIES_HPP

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

// SI constants and a light-weight dimension bookkeeping type. The constants
// table is fixed to CODATA 2018 so that every derived number in the test
// suite and the CLI reports is reproducible bit for bit.

namespace droplet::quantities {

struct PhysicalConstants {
    double c;    // speed of light in vacuum [m/s]
    double h;    // Planck constant [J s]
    double hbar; // reduced Planck constant [J s]
    double e;    // elementary charge [C]
    double eps0; // vacuum permittivity [F/m]
    double kB;   // Boltzmann constant [J/K]
    double m0;   // electron rest mass [kg]
};

// CODATA 2018. c, h, e, kB are exact by the 2019 SI redefinition; eps0 and
// m0 carry the recommended measured values.
constexpr PhysicalConstants constants() {
    constexpr double h = 6.62607015e-34;
    return PhysicalConstants{
        299792458.0,              // c
        h,                        // h
        h / (2.0 * std::numbers::pi),
        1.602176634e-19,          // e
        8.8541878128e-12,         // eps0
        1.380649e-23,             // kB
        9.1093837015e-31,         // m0
    };
}

inline constexpr const char* kConstantsVersion = "CODATA-2018";

// Exponent tuple over (length, mass, time, current, temperature).
struct Dimension {
    std::array<int, 5> exp{0, 0, 0, 0, 0};

    friend constexpr bool operator==(const Dimension&, const Dimension&) = default;

    constexpr Dimension operator+(const Dimension& o) const {
        Dimension r;
        for (std::size_t i = 0; i < 5; ++i) r.exp[i] = exp[i] + o.exp[i];
        return r;
    }
    constexpr Dimension operator-(const Dimension& o) const {
        Dimension r;
        for (std::size_t i = 0; i < 5; ++i) r.exp[i] = exp[i] - o.exp[i];
        return r;
    }
    constexpr Dimension operator*(int n) const {
        Dimension r;
        for (std::size_t i = 0; i < 5; ++i) r.exp[i] = exp[i] * n;
        return r;
    }

    std::string str() const;
};

namespace dim {
inline constexpr Dimension dimensionless{};
inline constexpr Dimension length{{1, 0, 0, 0, 0}};
inline constexpr Dimension mass{{0, 1, 0, 0, 0}};
inline constexpr Dimension time{{0, 0, 1, 0, 0}};
inline constexpr Dimension current{{0, 0, 0, 1, 0}};
inline constexpr Dimension temperature{{0, 0, 0, 0, 1}};
inline constexpr Dimension velocity = length - time;
inline constexpr Dimension frequency = dimensionless - time;
inline constexpr Dimension energy = mass + length * 2 - time * 2;
inline constexpr Dimension charge = current + time;
inline constexpr Dimension spring = mass - time * 2; // N/m
} // namespace dim

// A runtime-checked scalar. Hot loops operate on raw doubles; Quantity is
// meant for interface boundaries and tests.
struct Quantity {
    double value = 0.0;
    Dimension dimension{};

    Quantity operator*(const Quantity& o) const {
        return {value * o.value, dimension + o.dimension};
    }
    Quantity operator/(const Quantity& o) const {
        return {value / o.value, dimension - o.dimension};
    }
    Quantity operator+(const Quantity& o) const {
        require_same(o, "add");
        return {value + o.value, dimension};
    }
    Quantity operator-(const Quantity& o) const {
        require_same(o, "subtract");
        return {value - o.value, dimension};
    }

  private:
    void require_same(const Quantity& o, const char* op) const;
};

constexpr bool check_dim(const Quantity& q, const Dimension& expected) {
    return q.dimension == expected;
}

} // namespace droplet::quantities

#endif
