#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "carlab/core.hpp"

namespace carlab {

// Iterative radix-2 FFT. Twiddles are computed directly from the reduced
// phase (no recurrence), keeping roundoff at the O(eps) level per butterfly.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::domain_error("fft_inplace: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double turn = sgn / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = unit_phase(turn * static_cast<double>(k));
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

// Full linear convolution: result[k] = sum_i a[i] b[k-i], length |a|+|b|-1.
inline std::vector<std::complex<double>> convolve_linear(
    std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out = a.size() + b.size() - 1;
    const std::size_t n = std::bit_ceil(out);
    a.resize(n);
    b.resize(n);
    fft_inplace(a, false);
    fft_inplace(b, false);
    for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
    fft_inplace(a, true);
    a.resize(out);
    return a;
}

}  // namespace carlab
