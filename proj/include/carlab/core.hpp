#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <quadmath.h>

#include "carlab/params.hpp"

namespace carlab {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// e(x) = exp(2 pi i x). The argument is reduced to [-1/2,1/2] before the
// trigonometric evaluation so large inputs keep full phase accuracy.
inline std::complex<double> unit_phase(double x) {
    if (!std::isfinite(x)) throw std::domain_error("unit_phase: non-finite argument");
    const double r = x - std::round(x);
    return {std::cos(two_pi * r), std::sin(two_pi * r)};
}

// (a*k) mod 1 with the integer k potentially huge. Split the product with an
// FMA so the only rounding left is the final addition; fmod on the high part
// is exact for doubles.
inline double reduced_product(double a, std::int64_t k) {
    const double kd = static_cast<double>(k);
    const double hi = a * kd;
    const double lo = std::fma(a, kd, -hi);
    return std::fmod(hi, 1.0) + lo;
}

// Fractional part of |n|^c, computed in quad precision. Shared by the floor
// and the nearest-integer distance below.
inline double frac_power(std::int64_t n, double c) {
    const __float128 v = powq(static_cast<__float128>(n < 0 ? -n : n), static_cast<__float128>(c));
    return static_cast<double>(v - floorq(v));
}

// sign(n)^i * floor(|n|^c). The double-precision power is floored directly
// unless it lands within 1e-9 (relative) of an integer, in which case the
// power is recomputed in quad precision before flooring.
inline std::int64_t signed_floor_power(std::int64_t n, double c, SignMode mode) {
    if (n == 0) throw std::domain_error("signed_floor_power: n must be nonzero");
    const double an = static_cast<double>(n < 0 ? -n : n);
    const double v = std::pow(an, c);
    std::int64_t fl;
    const double nearest = std::round(v);
    if (std::abs(v - nearest) < 1e-9 * std::max(1.0, v)) {
        const __float128 vq = powq(static_cast<__float128>(an), static_cast<__float128>(c));
        fl = static_cast<std::int64_t>(floorq(vq));
    } else {
        fl = static_cast<std::int64_t>(std::floor(v));
    }
    const bool negate = (mode == SignMode::odd) && n < 0;
    return negate ? -fl : fl;
}

// Distance of |n|^c to the nearest integer. Exact half-integers return 1/2.
inline double nearest_int_distance(std::int64_t n, double c) {
    const double f = frac_power(n, c);
    return std::min(f, 1.0 - f);
}

namespace detail {
inline double bump_side(double u) {
    // s(u) = g(u)/(g(u)+g(1-u)) with g(u) = exp(-1/u) on u>0.
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double g = std::exp(-1.0 / u);
    const double h = std::exp(-1.0 / (1.0 - u));
    return g / (g + h);
}
}  // namespace detail

// Even smooth bump: 1 on [-1/4,1/4], 0 outside (-1/2,1/2), symmetric
// transition with bump(3/8) = 1/2.
inline double bump(double x) {
    const double a = std::abs(x);
    if (a <= 0.25) return 1.0;
    if (a >= 0.5) return 0.0;
    return detail::bump_side((0.5 - a) * 4.0);
}

// psi_j(x) = (phi(2^-j x) - phi(2^-j+1 x)) / x. Odd, supported on
// 2^{j-3} <= |x| <= 2^{j-1}, telescopes to 1/x.
inline double window_value(int j, double x) {
    if (x == 0.0) return 0.0;
    const double s = std::ldexp(x, -j);
    return (bump(s) - bump(2.0 * s)) / x;
}

inline double signed_window_value(int j, SignHalf tau, double x) {
    if (tau == SignHalf::plus) return x > 0.0 ? window_value(j, x) : 0.0;
    return x < 0.0 ? window_value(j, x) : 0.0;
}

// Product cutoff eta(xi,lambda) = eta1(xi) eta1(lambda) with eta1 = bump.
inline double cutoff_eta(double xi, double lambda) { return bump(xi) * bump(lambda); }

}  // namespace carlab
