#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace carlab {

struct VariationResult {
    double value = 0.0;
    std::vector<std::size_t> witnessIndices;  // increasing chain realizing value
};

// Exact r-variation sup_{t_0<...<t_J} (sum |a_{t_{k+1}} - a_{t_k}|^r)^{1/r}
// by dynamic programming over chain endpoints.
inline VariationResult r_variation(const std::vector<std::complex<double>>& a, double r) {
    if (a.size() < 2) throw std::domain_error("r_variation: need at least 2 terms");
    if (!(r >= 1.0)) throw std::domain_error("r_variation: r must be >= 1");
    const std::size_t n = a.size();
    std::vector<double> best(n, 0.0);
    std::vector<std::size_t> parent(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        parent[i] = i;  // sentinel: chain starts here
        for (std::size_t k = 0; k < i; ++k) {
            const double cand = best[k] + std::pow(std::abs(a[i] - a[k]), r);
            if (cand > best[i]) {
                best[i] = cand;
                parent[i] = k;
            }
        }
    }
    std::size_t end = n - 1;
    for (std::size_t i = 0; i < n; ++i)
        if (best[i] > best[end]) end = i;
    VariationResult res;
    res.value = std::pow(best[end], 1.0 / r);
    if (best[end] == 0.0) {
        res.witnessIndices = {0, n - 1};
        return res;
    }
    std::vector<std::size_t> chain{end};
    while (parent[chain.back()] != chain.back()) chain.push_back(parent[chain.back()]);
    res.witnessIndices.assign(chain.rbegin(), chain.rend());
    return res;
}

// floor(base^n) for n = 0..count-1, deduplicated and increasing
inline std::vector<std::int64_t> lacunary_scales(double base, int count) {
    if (!(base > 1.0)) throw std::domain_error("lacunary_scales: base must exceed 1");
    std::vector<std::int64_t> out;
    for (int n = 0; n < count; ++n) {
        const auto t = static_cast<std::int64_t>(std::floor(std::pow(base, n)));
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    return out;
}

}  // namespace carlab
