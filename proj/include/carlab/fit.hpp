#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace carlab {

// OLS fit of log2(value) against scaleIndex; slope is in log2 units per step.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rSquared = 0.0;
    int windowLo = 0;  // scale index range the fit was computed on
    int windowHi = 0;
};

inline DecayFit decay_fit(const std::vector<std::pair<int, double>>& points) {
    if (points.size() < 4) throw std::domain_error("decay_fit: need at least 4 points");
    double sx = 0, sy = 0;
    int lo = points.front().first, hi = points.front().first;
    for (const auto& [x, v] : points) {
        if (!(v > 0.0)) throw std::domain_error("decay_fit: values must be positive");
        sx += x;
        sy += std::log2(v);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, v] : points) {
        const double dx = x - mx;
        const double dy = std::log2(v) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::domain_error("decay_fit: degenerate scale window");
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.windowLo = lo;
    fit.windowHi = hi;
    double ssRes = 0.0;
    for (const auto& [x, v] : points) {
        const double r = std::log2(v) - (fit.intercept + fit.slope * x);
        ssRes += r * r;
    }
    // zero-variance response: an exact constant fit counts as perfect
    fit.rSquared = syy <= 1e-20 ? 1.0 : 1.0 - ssRes / syy;
    return fit;
}

}  // namespace carlab
