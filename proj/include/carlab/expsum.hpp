#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "carlab/core.hpp"
#include "carlab/kahan.hpp"

namespace carlab {

struct BoundEnvelope {
    enum class Kind { full_sum, weighted_dyadic };
    Kind kind;
    double value;
};

// S_N(xi1, xi2) = sum_{n=1..N} e(xi2 floor(n^c) + xi1 n), ascending n with
// compensated accumulation.
inline std::complex<double> exp_sum(std::int64_t N, double xi1, double xi2, double c) {
    if (N < 1) throw std::domain_error("exp_sum: N must be positive");
    KahanComplexSum acc;
    for (std::int64_t n = 1; n <= N; ++n) {
        const std::int64_t k = signed_floor_power(n, c, SignMode::even);
        acc.add(unit_phase(reduced_product(xi2, k) + reduced_product(xi1, n)));
    }
    return acc.value();
}

// Block sum over P <= n <= P' of e(t n^c + xi n), the un-floored phase.
inline std::complex<double> exp_sum_dyadic(std::int64_t P, std::int64_t Pprime, double t,
                                           double xi, double c) {
    if (Pprime < P) throw std::domain_error("exp_sum_dyadic: empty range");
    KahanComplexSum acc;
    for (std::int64_t n = P; n <= Pprime; ++n) {
        const std::int64_t k = signed_floor_power(n, c, SignMode::even);
        const double f = frac_power(n, c);
        const double phase = reduced_product(t, k) + t * f + reduced_product(xi, n);
        acc.add(unit_phase(phase));
    }
    return acc.value();
}

// V_{P,P'}(M) = sum_{P<=n<=P'} min{1, 1/(M ||n^c||)}.
inline double nearest_int_weight_sum(std::int64_t P, std::int64_t Pprime, std::int64_t M,
                                     double c) {
    if (Pprime < P) throw std::domain_error("nearest_int_weight_sum: empty range");
    KahanSum<double> acc;
    for (std::int64_t n = P; n <= Pprime; ++n) {
        const double d = nearest_int_distance(n, c);
        const double md = static_cast<double>(M) * d;
        acc.add(md <= 1.0 ? 1.0 : 1.0 / md);
    }
    return acc.value();
}

// c_m(x) = (1 - e(-x)) / (2 pi i (x + m)); the m = 0 coefficient tends to 1
// as x -> 0.
inline std::complex<double> fourier_coeff(std::int64_t m, double x) {
    const double denom = x + static_cast<double>(m);
    if (m == 0 && std::abs(x) < 1e-12) return {1.0, 0.0};
    const std::complex<double> num = 1.0 - unit_phase(-x);
    if (denom == 0.0) {
        if (std::abs(num) > 0.0) throw std::domain_error("fourier_coeff: pole at x+m = 0");
        return {0.0, 0.0};
    }
    return num / (std::complex<double>(0.0, two_pi) * denom);
}

// Residual of the floor-removal series at truncation M:
//   g_{M,xi2}(n) = e(-xi2 {n^c}) - sum_{|m|<=M} c_m(xi2) e(m n^c).
inline std::complex<double> floor_series_residual(std::int64_t n, std::int64_t M, double xi2,
                                                  double c) {
    const double f = frac_power(n, c);
    KahanComplexSum acc;
    for (std::int64_t m = -M; m <= M; ++m) {
        // e(m n^c) = e(m {n^c}) since the integer part contributes full turns.
        acc.add(fourier_coeff(m, xi2) * unit_phase(static_cast<double>(m) * f));
    }
    return unit_phase(-xi2 * f) - acc.value();
}

// Constant-free envelope for |S_N|: the minimum of the log-weighted branch
// and the summation-by-parts branch. A vanishing frequency disables the
// branch that degenerates; both vanishing is an error.
inline BoundEnvelope bound_full(std::int64_t N, std::int64_t M, double xi1, double xi2,
                                double c) {
    if (xi1 == 0.0 && xi2 == 0.0)
        throw std::domain_error("bound_full: both frequencies vanish");
    const double Nd = static_cast<double>(N);
    const double Md = static_cast<double>(M);
    const double inf = std::numeric_limits<double>::infinity();
    const double branch1 =
        xi2 == 0.0 ? inf
                   : (1.0 + std::log(Md)) * (Nd / Md + std::pow(Nd, c / 2.0) * std::sqrt(Md) +
                                             std::pow(Nd, 1.0 - c / 2.0) / std::sqrt(std::abs(xi2)));
    const double branch2 =
        xi1 == 0.0 ? inf : (std::pow(Nd, c) * std::abs(xi2) + 1.0) / std::abs(xi1);
    return {BoundEnvelope::Kind::full_sum, std::min(branch1, branch2)};
}

// Dyadic-scale envelope for the weighted sum at scale 2^j.
inline BoundEnvelope bound_weighted(int j, double xi1, double xi2, double c) {
    if (xi1 == 0.0 && xi2 == 0.0)
        throw std::domain_error("bound_weighted: both frequencies vanish");
    const double jd = static_cast<double>(j);
    const double inf = std::numeric_limits<double>::infinity();
    const double branch1 =
        xi2 == 0.0 ? inf
                   : jd * (std::exp2((c + 1.0) / 3.0 * jd) +
                           std::exp2((1.0 - c / 2.0) * jd) / std::sqrt(std::abs(xi2)));
    const double branch2 =
        xi1 == 0.0 ? inf : (std::exp2(c * jd) * std::abs(xi2) + 1.0) / std::abs(xi1);
    return {BoundEnvelope::Kind::weighted_dyadic, std::exp2(-jd) * std::min(branch1, branch2)};
}

}  // namespace carlab
