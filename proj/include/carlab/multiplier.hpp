#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <vector>

#include "carlab/core.hpp"
#include "carlab/expsum.hpp"
#include "carlab/kahan.hpp"
#include "carlab/params.hpp"
#include "carlab/quadrature.hpp"

namespace carlab {

// Frequency rectangle around (0,0) where the discrete multiplier tracks its
// continuous counterpart.
struct MajorBox {
    int j;
    double xiHalfWidth;
    double lambdaHalfWidth;

    MajorBox(int j_, const ParamSet& p)
        : j(j_),
          xiHalfWidth(std::exp2((2.0 * p.eps - 1.0) * j_)),
          lambdaHalfWidth(std::exp2((p.eps - p.c) * j_)) {}

    bool contains(double xi, double lambda) const {
        return std::abs(xi) <= xiHalfWidth && std::abs(lambda) <= lambdaHalfWidth;
    }
};

struct ErgodicBox {
    double t;
    double xi1HalfWidth;
    double xi2HalfWidth;

    ErgodicBox(double t_, const ParamSet& p)
        : t(t_),
          xi1HalfWidth(std::pow(t_, 2.0 * p.eps - 1.0)),
          xi2HalfWidth(std::pow(t_, p.eps - p.c)) {}

    bool contains(double xi1, double xi2) const {
        return std::abs(xi1) <= xi1HalfWidth && std::abs(xi2) <= xi2HalfWidth;
    }
};

inline bool in_major_box(int j, double xi, double lambda, const ParamSet& p) {
    return MajorBox(j, p).contains(xi, lambda);
}

inline bool in_ergodic_box(double t, double xi1, double xi2, const ParamSet& p) {
    return ErgodicBox(t, p).contains(xi1, xi2);
}

// lambda outside the small-frequency window X_j (closed boundary: the
// threshold itself still belongs to X_j).
inline bool X_j_complement_test(int j, double lambda, const ParamSet& p) {
    return std::abs(lambda) > std::exp2((-p.c + p.nu) * j);
}

namespace detail {

// (lambda * t^c) mod 1 for real t > 0, splitting t^c into integer and
// fractional parts so the huge integer multiple is reduced exactly.
inline double lambda_power_phase(double lambda, double t, double c) {
    const double v = std::pow(t, c);
    const double fl = std::floor(v);
    return reduced_product(lambda, static_cast<std::int64_t>(fl)) + lambda * (v - fl);
}

}  // namespace detail

// m_j^i(xi,lambda) = sum_{n != 0} e(lambda sign(n)^i floor(|n|^c) - xi n) psi_j(n),
// summed over the support annulus with +-n paired.
inline std::complex<double> m_j(int j, double xi, double lambda, SignMode mode, double c) {
    const std::int64_t lo = static_cast<std::int64_t>(std::ceil(std::ldexp(1.0, j - 3)));
    const std::int64_t hi = static_cast<std::int64_t>(std::floor(std::ldexp(1.0, j - 1)));
    KahanComplexSum acc;
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double w = window_value(j, static_cast<double>(n));
        if (w == 0.0) continue;
        const std::int64_t k = signed_floor_power(n, c, SignMode::even);
        const double lam = reduced_product(lambda, k);
        const double xin = reduced_product(xi, n);
        const std::complex<double> pos = unit_phase(lam - xin);
        const std::complex<double> neg =
            mode == SignMode::even ? unit_phase(lam + xin) : unit_phase(-lam + xin);
        acc.add(w * (pos - neg));  // psi_j(-n) = -psi_j(n)
    }
    return acc.value();
}

// Exact term-by-term lambda-derivative of m_j.
inline std::complex<double> dlambda_m_j(int j, double xi, double lambda, SignMode mode,
                                        double c) {
    const std::int64_t lo = static_cast<std::int64_t>(std::ceil(std::ldexp(1.0, j - 3)));
    const std::int64_t hi = static_cast<std::int64_t>(std::floor(std::ldexp(1.0, j - 1)));
    KahanComplexSum acc;
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double w = window_value(j, static_cast<double>(n));
        if (w == 0.0) continue;
        const std::int64_t k = signed_floor_power(n, c, SignMode::even);
        const double kd = static_cast<double>(k);
        const double lam = reduced_product(lambda, k);
        const double xin = reduced_product(xi, n);
        const std::complex<double> pos = kd * unit_phase(lam - xin);
        // at -n the phase multiplier is sign(-n)^i k = (-1)^i k
        const std::complex<double> neg = mode == SignMode::even
                                             ? kd * unit_phase(lam + xin)
                                             : -kd * unit_phase(-lam + xin);
        acc.add(w * (pos - neg));
    }
    return std::complex<double>(0.0, two_pi) * acc.value();
}

// H_j^i(xi,lambda) = eta(xi,lambda) * int e(lambda [t]_i^c - xi t) psi_j(t) dt.
// Both support intervals are folded onto the positive one.
inline std::complex<double> H_j(int j, double xi, double lambda, SignMode mode, double c,
                                const QuadratureSpec& quad = {}) {
    const double eta = cutoff_eta(xi, lambda);
    if (eta == 0.0) return {0.0, 0.0};
    const double a = std::ldexp(1.0, j - 3);
    const double b = std::ldexp(1.0, j - 1);
    const double freq = std::abs(lambda) * c * std::pow(b, c - 1.0) + std::abs(xi);
    const double negSign = mode == SignMode::even ? 1.0 : -1.0;
    auto integrand = [&](double t) {
        const double w = window_value(j, t);
        const double lam = detail::lambda_power_phase(lambda, t, c);
        const std::complex<double> pos = unit_phase(lam - xi * t);
        const std::complex<double> neg = unit_phase(negSign * lam + xi * t);
        return w * (pos - neg);
    };
    return eta * oscillatory_integral(integrand, a, b, freq, quad);
}

inline std::complex<double> E_j(int j, double xi, double lambda, SignMode mode, double c,
                                const QuadratureSpec& quad = {}) {
    return m_j(j, xi, lambda, mode, c) - H_j(j, xi, lambda, mode, c, quad);
}

// Normalized discrete multiplier along the orbit (n, floor(n^c)).
inline std::complex<double> k_t(std::int64_t t, double xi1, double xi2, double c) {
    if (t < 1) throw std::domain_error("k_t: t must be positive");
    return exp_sum(t, -xi1, -xi2, c) / static_cast<double>(t);
}

// L_t(xi1,xi2) = (1/t) int_0^t e(-xi2 s^c - xi1 s) ds, integrated over a
// dyadic partition of [0,t] so each piece carries its own frequency bound.
inline std::complex<double> L_t(double t, double xi1, double xi2, double c,
                                const QuadratureSpec& quad = {}) {
    if (!(t > 0.0)) throw std::domain_error("L_t: t must be positive");
    auto integrand = [&](double s) {
        return unit_phase(-detail::lambda_power_phase(xi2, s, c) - xi1 * s);
    };
    KahanComplexSum acc;
    double left = 0.0;
    double right = std::min(1.0, t);
    while (left < t) {
        const double freq = std::abs(xi2) * c * std::pow(right, c - 1.0) + std::abs(xi1);
        acc.add(oscillatory_integral(integrand, left, right, freq, quad));
        left = right;
        right = std::min(2.0 * right, t);
    }
    return acc.value() / t;
}

// Sampled multiplier values with box-membership annotations.
struct MultiplierGrid {
    struct Point {
        double scale;
        double xi;
        double lambda;
        std::complex<double> value;
        bool inBox;
    };
    std::vector<Point> points;

    void write_csv(std::ostream& os) const {
        os << "scale,xi,lambda,re,im,abs,in_box\n";
        char buf[200];
        for (const auto& p : points) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", p.scale,
                          p.xi, p.lambda, p.value.real(), p.value.imag(), std::abs(p.value),
                          p.inBox ? 1 : 0);
            os << buf;
        }
    }
};

}  // namespace carlab
