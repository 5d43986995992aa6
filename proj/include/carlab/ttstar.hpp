#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "carlab/core.hpp"
#include "carlab/kahan.hpp"
#include "carlab/multiplier.hpp"
#include "carlab/params.hpp"
#include "carlab/quadrature.hpp"

namespace carlab {

// per-point modulation selection linearizing the sup over lambda
struct ChoiceFunctions {
    std::function<double(double)> lambdaOf;  // modulation at each point
    std::function<int(double)> jOf;          // scale at each point (continuous case)
    double lambdaLo = 0.0;                   // admissible interval [lo, hi)
    double lambdaHi = 0.0;

    double lambda_at(double x) const {
        const double v = lambdaOf(x);
        if (!(v >= lambdaLo) || !(v < lambdaHi))
            throw std::domain_error("ChoiceFunctions: lambda value outside admissible range");
        return v;
    }
};

// admissible dyadic shell index for the discrete kernel at scale j
inline bool r_admissible(int j, int r, const ParamSet& p) {
    const double jd = j;
    return r >= p.nu * jd - 2.0 && r <= (p.c + 2.0 * p.delta1) * jd + 2.0;
}

namespace detail {

// deterministic per-integer uniform in [0,1)
inline double hash_uniform(std::uint64_t x, std::uint64_t seed) {
    std::uint64_t z = x * 0x9e3779b97f4a7c15ull + seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return std::ldexp(static_cast<double>(z >> 11), -53);
}

}  // namespace detail

// lambda_x constant at position frac in [0,1) across [2^{r-cj}, 2^{r+1-cj})
inline ChoiceFunctions constant_choice(int j, int r, double c, double frac = 0.5) {
    ChoiceFunctions ch;
    ch.lambdaLo = std::exp2(static_cast<double>(r) - c * j);
    ch.lambdaHi = 2.0 * ch.lambdaLo;
    const double v = ch.lambdaLo * (1.0 + frac);
    ch.lambdaOf = [v](double) { return v; };
    return ch;
}

// independent uniform draw per point, seed-deterministic
inline ChoiceFunctions iid_uniform_choice(int j, int r, double c, std::uint64_t seed) {
    ChoiceFunctions ch;
    ch.lambdaLo = std::exp2(static_cast<double>(r) - c * j);
    ch.lambdaHi = 2.0 * ch.lambdaLo;
    const double lo = ch.lambdaLo;
    ch.lambdaOf = [lo, seed](double x) {
        return lo * (1.0 + detail::hash_uniform(static_cast<std::uint64_t>(
                                                    static_cast<std::int64_t>(std::llround(x))),
                                                seed));
    };
    return ch;
}

// nearly-constant lambda keeping (lambda_y/lambda_x)^{1/(c-2)} - 1 small:
// the hardest regime of the kernel case analysis
inline ChoiceFunctions resonant_choice(int j, int r, double c, const ParamSet& p,
                                       std::uint64_t seed) {
    ChoiceFunctions ch;
    ch.lambdaLo = std::exp2(static_cast<double>(r) - c * j);
    ch.lambdaHi = 2.0 * ch.lambdaLo;
    const double lo = ch.lambdaLo;
    const double amp = std::exp2(-p.delta2 * j - 8.0);
    ch.lambdaOf = [lo, amp, seed](double x) {
        return lo * (1.5 + amp * (detail::hash_uniform(
                                      static_cast<std::uint64_t>(
                                          static_cast<std::int64_t>(std::llround(x))),
                                      seed) -
                                  0.5));
    };
    return ch;
}

inline double epsilon_of_pair(double lambdaX, double lambdaY, double c) {
    return std::pow(lambdaY / lambdaX, 1.0 / (c - 2.0)) - 1.0;
}

// K_{tau,j}(x,y) = sum_m e(lambda_x |x-m|^c - lambda_y |y-m|^c)
//                        psi_j^tau(x-m) psi_j^tau(y-m), exact finite sum
inline std::complex<double> ttstar_kernel_discrete(std::int64_t x, std::int64_t y, int j,
                                                   int r, SignHalf tau,
                                                   const ChoiceFunctions& choice, double c,
                                                   const ParamSet& p = {}) {
    if (!r_admissible(j, r, p))
        throw std::domain_error("ttstar_kernel_discrete: r outside admissible shell range");
    const double lambdaX = choice.lambda_at(static_cast<double>(x));
    const double lambdaY = choice.lambda_at(static_cast<double>(y));
    const auto lo = static_cast<std::int64_t>(std::ldexp(1.0, j - 3));
    const auto hi = static_cast<std::int64_t>(std::ldexp(1.0, j - 1));
    // tau = +: x - m in [lo, hi]; tau = -: x - m in [-hi, -lo]
    std::int64_t mLo, mHi;
    if (tau == SignHalf::plus) {
        mLo = std::max(x - hi, y - hi);
        mHi = std::min(x - lo, y - lo);
    } else {
        mLo = std::max(x + lo, y + lo);
        mHi = std::min(x + hi, y + hi);
    }
    KahanComplexSum acc;
    for (std::int64_t m = mLo; m <= mHi; ++m) {
        const double w1 = signed_window_value(j, tau, static_cast<double>(x - m));
        const double w2 = signed_window_value(j, tau, static_cast<double>(y - m));
        if (w1 == 0.0 || w2 == 0.0) continue;
        const double phase =
            detail::lambda_power_phase(lambdaX, static_cast<double>(std::llabs(x - m)), c) -
            detail::lambda_power_phase(lambdaY, static_cast<double>(std::llabs(y - m)), c);
        acc.add(w1 * w2 * unit_phase(phase));
    }
    return acc.value();
}

// piecewise near/far pointwise bound on a kernel
struct KernelEnvelope {
    double nearAmplitude = 0.0;
    double nearRadius = 0.0;
    double farAmplitude = 0.0;
    double farRadius = 0.0;

    double at(double dist) const {
        dist = std::abs(dist);
        if (dist <= nearRadius) return nearAmplitude;
        if (dist <= farRadius) return farAmplitude;
        return 0.0;
    }
};

inline KernelEnvelope ttstar_envelope_discrete(int j, const ParamSet& p, double fittedRho4) {
    if (!(fittedRho4 >= 0.0))
        throw std::domain_error("ttstar_envelope_discrete: rho4 must be nonnegative");
    KernelEnvelope env;
    env.nearAmplitude = std::exp2(-static_cast<double>(j));
    env.nearRadius = std::exp2((1.0 - p.delta2) * j);
    env.farAmplitude = std::exp2(-(1.0 + fittedRho4) * j);
    env.farRadius = std::exp2(static_cast<double>(j));
    return env;
}

// K_{i,tau,ell}(x,y) = int e(lambda_x [x-t]_i^c - lambda_y [y-t]_i^c)
//                            psi_{j_x}^tau(x-t) psi_{j_y}^tau(y-t) dt
inline std::complex<double> ttstar_kernel_continuous(double x, double y, int ell,
                                                     SignMode mode, SignHalf tau,
                                                     const ChoiceFunctions& choice, double c,
                                                     const QuadratureSpec& quad = {}) {
    const int jx = choice.jOf(x);
    const int jy = choice.jOf(y);
    const double lambdaX = choice.lambdaOf(x);
    const double lambdaY = choice.lambdaOf(y);
    // lambda^{1/c} 2^{j} must sit at dyadic height ell (within a factor of 2)
    for (const auto& [lam, jj] : {std::pair{lambdaX, jx}, std::pair{lambdaY, jy}}) {
        const double height = std::pow(lam, 1.0 / c) * std::exp2(jj - ell);
        if (!(height >= 0.5) || !(height < 2.0))
            throw std::domain_error(
                "ttstar_kernel_continuous: choice violates the lambda^{1/c} 2^j ~ 2^ell rule");
    }
    // support intersection of the two signed windows
    double tLo, tHi;
    if (tau == SignHalf::plus) {
        tLo = std::max(x - std::ldexp(1.0, jx - 1), y - std::ldexp(1.0, jy - 1));
        tHi = std::min(x - std::ldexp(1.0, jx - 3), y - std::ldexp(1.0, jy - 3));
    } else {
        tLo = std::max(x + std::ldexp(1.0, jx - 3), y + std::ldexp(1.0, jy - 3));
        tHi = std::min(x + std::ldexp(1.0, jx - 1), y + std::ldexp(1.0, jy - 1));
    }
    if (tHi <= tLo) return {0.0, 0.0};
    const double signX = tau == SignHalf::plus ? 1.0 : -1.0;
    const double sx = mode == SignMode::even ? 1.0 : signX;
    const double reach = std::max(std::max(std::abs(x - tLo), std::abs(x - tHi)),
                                  std::max(std::abs(y - tLo), std::abs(y - tHi)));
    const double freq = (lambdaX + lambdaY) * c * std::pow(reach, c - 1.0);
    auto integrand = [&](double t) {
        const double w1 = signed_window_value(jx, tau, x - t);
        const double w2 = signed_window_value(jy, tau, y - t);
        if (w1 == 0.0 || w2 == 0.0) return std::complex<double>{};
        const double phase = sx * (detail::lambda_power_phase(lambdaX, std::abs(x - t), c) -
                                   detail::lambda_power_phase(lambdaY, std::abs(y - t), c));
        return w1 * w2 * unit_phase(phase);
    };
    return oscillatory_integral(integrand, tLo, tHi, freq, quad);
}

// L_j(x) = 2^{-j} 1_{2^{j-3} <= |x| <= 2^{j-1}} min{1, 1/(M || |x|^c ||)}
inline double L_j_weight(std::int64_t x, int j, std::int64_t M, double c) {
    if (j < 1 || M < 1) throw std::domain_error("L_j_weight: need j >= 1 and M >= 1");
    const std::int64_t a = std::llabs(x);
    const auto lo = static_cast<std::int64_t>(std::ldexp(1.0, j - 3));
    const auto hi = static_cast<std::int64_t>(std::ldexp(1.0, j - 1));
    if (a < lo || a > hi) return 0.0;
    const double d = nearest_int_distance(a, c);
    const double cap = d > 0.0 ? std::min(1.0, 1.0 / (static_cast<double>(M) * d)) : 1.0;
    return std::exp2(-static_cast<double>(j)) * cap;
}

inline double L_j_l1(int j, std::int64_t M, double c) {
    const auto lo = static_cast<std::int64_t>(std::ldexp(1.0, j - 3));
    const auto hi = static_cast<std::int64_t>(std::ldexp(1.0, j - 1));
    KahanSum<double> s;
    for (std::int64_t n = lo; n <= hi; ++n) s.add(L_j_weight(n, j, M, c));
    return 2.0 * s.value();  // the weight is even
}

// max row absolute sum over a sampled kernel block (Schur bound)
inline double schur_norm_probe(const std::vector<std::vector<std::complex<double>>>& block) {
    double worst = 0.0;
    for (const auto& row : block) {
        KahanSum<double> s;
        for (const auto& z : row) s.add(std::abs(z));
        worst = std::max(worst, s.value());
    }
    return worst;
}

}  // namespace carlab
