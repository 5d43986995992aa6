#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "carlab/core.hpp"
#include "carlab/fft.hpp"
#include "carlab/kahan.hpp"
#include "carlab/quadrature.hpp"
#include "carlab/signal.hpp"

namespace carlab {

enum class ConvPath { direct, fft };

struct TruncationInfo {
    bool truncated = false;
    double tailBound = 0.0;  // l1-scale estimate of the dropped terms
};

// default kernel truncation: 4x the support radius (>= 4)
inline std::int64_t default_truncation(const Signal1D& f) {
    return 4 * std::max<std::int64_t>(f.radius(), 1);
}

namespace detail {

inline std::complex<double> carleson_kernel(std::int64_t n, double lambda, SignMode mode,
                                            double c) {
    const std::int64_t k = signed_floor_power(n, c, mode);
    return unit_phase(reduced_product(lambda, k)) / static_cast<double>(n);
}

}  // namespace detail

// sum_{0 < |n| <= nMax} f(x - n) e(lambda sign(n)^i floor(|n|^c)) / n on the
// support box dilated by nMax.
inline Signal1D modulated_convolution(const Signal1D& f, double lambda, SignMode mode,
                                      double c, ConvPath path = ConvPath::fft,
                                      std::int64_t nMax = 0,
                                      TruncationInfo* info = nullptr) {
    if (f.values.empty()) return {};
    if (nMax <= 0) nMax = default_truncation(f);
    if (info) {
        *info = {};
        const std::int64_t needed = 2 * f.radius();
        if (nMax < needed) {
            info->truncated = true;
            // dropped terms have nMax < |n| <= nMax + support width
            const double reach =
                static_cast<double>(nMax + static_cast<std::int64_t>(f.size()));
            info->tailBound =
                2.0 * std::log(reach / static_cast<double>(nMax)) * lp_norm(f, 1.0);
        }
    }
    Signal1D out(f.lo - nMax, f.size() + 2 * static_cast<std::size_t>(nMax));
    if (path == ConvPath::direct) {
        for (std::int64_t x = out.lo; x <= out.hi(); ++x) {
            const std::int64_t nLo = std::max(-nMax, x - f.hi());
            const std::int64_t nHi = std::min(nMax, x - f.lo);
            KahanComplexSum acc;
            for (std::int64_t n = nLo; n <= nHi; ++n) {
                if (n == 0) continue;
                const auto fv = f.at(x - n);
                if (fv == std::complex<double>{}) continue;
                acc.add(fv * detail::carleson_kernel(n, lambda, mode, c));
            }
            out[x] = acc.value();
        }
        return out;
    }
    std::vector<std::complex<double>> kernel(2 * static_cast<std::size_t>(nMax) + 1);
    for (std::int64_t n = -nMax; n <= nMax; ++n)
        kernel[static_cast<std::size_t>(n + nMax)] =
            n == 0 ? std::complex<double>{} : detail::carleson_kernel(n, lambda, mode, c);
    out.values = convolve_linear(f.values, kernel);
    return out;
}

// lambda sample set for the maximal operator
struct LambdaGrid {
    std::vector<double> points;  // sorted, within [-1/2, 1/2)

    // uniform grid of step <= maxStep, aligned so that 0 is a grid point and
    // the half-open interval [-1/2, 1/2) is covered
    static LambdaGrid uniform(double maxStep) {
        if (!(maxStep > 0.0)) throw std::domain_error("LambdaGrid: step must be positive");
        auto m = static_cast<std::int64_t>(std::ceil(0.5 / maxStep));
        if (m < 1) m = 1;
        const double step = 0.5 / static_cast<double>(m);
        LambdaGrid g;
        g.points.reserve(static_cast<std::size_t>(2 * m));
        for (std::int64_t k = -m; k < m; ++k)
            g.points.push_back(static_cast<double>(k) * step);
        return g;
    }
};

// resolution rule tying the grid step to the kernel truncation
inline double lambda_grid_step(std::int64_t nMax, double c, double tol = 1.0 / 16.0) {
    return tol / std::pow(static_cast<double>(nMax), c);
}

struct CarlesonResult {
    Signal1D magnitudes;          // real-valued, stored in the real part
    std::vector<double> argmax;   // maximizing lambda per output index
};

// pointwise sup over the grid of |modulated_convolution|; ties broken toward
// smaller |lambda|, then smaller lambda
inline CarlesonResult carleson_maximal(const Signal1D& f, SignMode mode, double c,
                                       const LambdaGrid& grid,
                                       ConvPath path = ConvPath::fft,
                                       std::int64_t nMax = 0) {
    if (grid.points.empty()) throw std::domain_error("carleson_maximal: empty lambda grid");
    if (f.values.empty()) return {};
    if (nMax <= 0) nMax = default_truncation(f);
    CarlesonResult res;
    bool first = true;
    for (const double lambda : grid.points) {
        const Signal1D conv = modulated_convolution(f, lambda, mode, c, path, nMax);
        if (first) {
            res.magnitudes = Signal1D(conv.lo, conv.size());
            res.argmax.assign(conv.size(), lambda);
            for (std::size_t k = 0; k < conv.size(); ++k)
                res.magnitudes.values[k] = std::abs(conv.values[k]);
            first = false;
            continue;
        }
        for (std::size_t k = 0; k < conv.size(); ++k) {
            const double mag = std::abs(conv.values[k]);
            const double cur = res.magnitudes.values[k].real();
            const double la = res.argmax[k];
            const bool better =
                mag > cur ||
                (mag == cur && (std::abs(lambda) < std::abs(la) ||
                                (std::abs(lambda) == std::abs(la) && lambda < la)));
            if (better) {
                res.magnitudes.values[k] = mag;
                res.argmax[k] = lambda;
            }
        }
    }
    return res;
}

// A_t f(x1,x2) = (1/t) sum_{n<=t} f(x1-n, x2-floor(n^c)), on the support box
// dilated by (t, floor(t^c))
inline Signal2D ergodic_average(const Signal2D& f, std::int64_t t, double c) {
    if (t < 1) throw std::domain_error("ergodic_average: t must be >= 1");
    if (f.values.empty()) return {};
    std::vector<std::pair<std::int64_t, std::int64_t>> orbit;
    orbit.reserve(static_cast<std::size_t>(t));
    for (std::int64_t n = 1; n <= t; ++n)
        orbit.emplace_back(n, signed_floor_power(n, c, SignMode::even));
    const std::int64_t d2 = orbit.back().second;
    Signal2D out(f.lo1, f.lo2, f.n1 + static_cast<std::size_t>(t),
                 f.n2 + static_cast<std::size_t>(d2));
    const double inv = 1.0 / static_cast<double>(t);
    for (std::int64_t x1 = out.lo1; x1 <= out.hi1(); ++x1)
        for (std::int64_t x2 = out.lo2; x2 <= out.hi2(); ++x2) {
            KahanComplexSum acc;
            for (const auto& [n, k] : orbit) {
                const auto v = f.at(x1 - n, x2 - k);
                if (v != std::complex<double>{}) acc.add(v);
            }
            out.ref(x1, x2) = inv * acc.value();
        }
    return out;
}

// pointwise max of |A_t f| over the listed scales (real-valued output)
inline Signal2D maximal_average(const Signal2D& f, const std::vector<std::int64_t>& scales,
                                double c) {
    if (scales.empty()) throw std::domain_error("maximal_average: no scales given");
    bool first = true;
    Signal2D out;
    for (const std::int64_t t : scales) {
        const Signal2D a = ergodic_average(f, t, c);
        if (first) {
            out = Signal2D(a.lo1, a.lo2, a.n1, a.n2);
            first = false;
        } else if (a.hi1() > out.hi1() || a.hi2() > out.hi2()) {
            Signal2D grown(out.lo1, out.lo2,
                           static_cast<std::size_t>(std::max(a.hi1(), out.hi1()) - out.lo1 + 1),
                           static_cast<std::size_t>(std::max(a.hi2(), out.hi2()) - out.lo2 + 1));
            for (std::int64_t x1 = out.lo1; x1 <= out.hi1(); ++x1)
                for (std::int64_t x2 = out.lo2; x2 <= out.hi2(); ++x2)
                    grown.ref(x1, x2) = out.at(x1, x2);
            out = std::move(grown);
        }
        for (std::int64_t x1 = a.lo1; x1 <= a.hi1(); ++x1)
            for (std::int64_t x2 = a.lo2; x2 <= a.hi2(); ++x2) {
                const double m = std::abs(a.at(x1, x2));
                if (m > out.at(x1, x2).real()) out.ref(x1, x2) = m;
            }
    }
    return out;
}

// regular complex-valued grid on R^2 with bilinear interpolation
struct GridFunction2D {
    double x1lo = 0.0, x2lo = 0.0;
    double dx1 = 1.0, dx2 = 1.0;
    std::size_t n1 = 0, n2 = 0;
    std::vector<std::complex<double>> values;  // row-major over the first axis

    std::complex<double>& ref(std::size_t a, std::size_t b) { return values[a * n2 + b]; }

    std::complex<double> at(double x1, double x2) const {
        const double u = (x1 - x1lo) / dx1;
        const double v = (x2 - x2lo) / dx2;
        if (u < 0.0 || v < 0.0 || u > static_cast<double>(n1 - 1) ||
            v > static_cast<double>(n2 - 1))
            throw std::domain_error("GridFunction2D: point outside sampled domain");
        const auto a = std::min(static_cast<std::size_t>(u), n1 - 2);
        const auto b = std::min(static_cast<std::size_t>(v), n2 - 2);
        const double fu = u - static_cast<double>(a);
        const double fv = v - static_cast<double>(b);
        return (1 - fu) * (1 - fv) * values[a * n2 + b] +
               fu * (1 - fv) * values[(a + 1) * n2 + b] +
               (1 - fu) * fv * values[a * n2 + b + 1] +
               fu * fv * values[(a + 1) * n2 + b + 1];
    }
};

// B_t f(x1,x2) = (1/t) int_0^t f(x1-s, x2-s^c) ds along the sampled field
inline std::complex<double> continuous_average(const GridFunction2D& f, double x1, double x2,
                                               double t, double c,
                                               const QuadratureSpec& quad = {}) {
    if (!(t > 0.0)) throw std::domain_error("continuous_average: t must be positive");
    // endpoint check up front: the curve is monotone in both coordinates
    (void)f.at(x1, x2);
    (void)f.at(x1 - t, x2 - std::pow(t, c));
    const auto v = oscillatory_integral(
        [&](double s) { return f.at(x1 - s, x2 - std::pow(s, c)); }, 0.0, t, 0.0, quad);
    return v / t;
}

}  // namespace carlab
