#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "carlab/kahan.hpp"

namespace carlab {

// Finitely supported complex signal on Z, stored densely on [lo, lo+size).
struct Signal1D {
    std::int64_t lo = 0;
    std::vector<std::complex<double>> values;

    Signal1D() = default;
    Signal1D(std::int64_t lo_, std::size_t n) : lo(lo_), values(n) {}

    std::int64_t hi() const { return lo + static_cast<std::int64_t>(values.size()) - 1; }
    std::size_t size() const { return values.size(); }

    std::complex<double> at(std::int64_t i) const {
        if (i < lo || i > hi()) return {0.0, 0.0};
        return values[static_cast<std::size_t>(i - lo)];
    }
    std::complex<double>& operator[](std::int64_t i) {
        return values[static_cast<std::size_t>(i - lo)];
    }

    // largest |index| in the storage box
    std::int64_t radius() const {
        if (values.empty()) return 0;
        return std::max(std::llabs(lo), std::llabs(hi()));
    }

    static Signal1D impulse(std::int64_t i) {
        Signal1D f(i, 1);
        f.values[0] = {1.0, 0.0};
        return f;
    }
};

// Finitely supported complex signal on Z^2, row-major over the first index.
struct Signal2D {
    std::int64_t lo1 = 0, lo2 = 0;
    std::size_t n1 = 0, n2 = 0;
    std::vector<std::complex<double>> values;

    Signal2D() = default;
    Signal2D(std::int64_t lo1_, std::int64_t lo2_, std::size_t n1_, std::size_t n2_)
        : lo1(lo1_), lo2(lo2_), n1(n1_), n2(n2_), values(n1_ * n2_) {}

    std::int64_t hi1() const { return lo1 + static_cast<std::int64_t>(n1) - 1; }
    std::int64_t hi2() const { return lo2 + static_cast<std::int64_t>(n2) - 1; }

    std::complex<double> at(std::int64_t i1, std::int64_t i2) const {
        if (i1 < lo1 || i1 > hi1() || i2 < lo2 || i2 > hi2()) return {0.0, 0.0};
        return values[static_cast<std::size_t>(i1 - lo1) * n2 +
                      static_cast<std::size_t>(i2 - lo2)];
    }
    std::complex<double>& ref(std::int64_t i1, std::int64_t i2) {
        return values[static_cast<std::size_t>(i1 - lo1) * n2 +
                      static_cast<std::size_t>(i2 - lo2)];
    }

    static Signal2D impulse(std::int64_t i1, std::int64_t i2) {
        Signal2D f(i1, i2, 1, 1);
        f.values[0] = {1.0, 0.0};
        return f;
    }
};

namespace detail {

inline double lp_accumulate(const std::vector<std::complex<double>>& v, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    KahanSum<double> s;
    for (const auto& z : v) {
        const double a = std::abs(z);
        if (a > 0.0) s.add(std::pow(a, p));
    }
    return std::pow(s.value(), 1.0 / p);
}

}  // namespace detail

inline double lp_norm(const Signal1D& f, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
    return detail::lp_accumulate(f.values, p);
}

inline double lp_norm(const Signal2D& f, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
    return detail::lp_accumulate(f.values, p);
}

// --- serialization ---------------------------------------------------------

inline void write_csv(const Signal1D& f, std::ostream& os) {
    os << "index,re,im\n";
    char buf[128];
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g\n",
                      static_cast<long long>(f.lo + static_cast<std::int64_t>(k)),
                      f.values[k].real(), f.values[k].imag());
        os << buf;
    }
}

inline void write_csv(const Signal2D& f, std::ostream& os) {
    os << "index1,index2,re,im\n";
    char buf[160];
    for (std::size_t a = 0; a < f.n1; ++a)
        for (std::size_t b = 0; b < f.n2; ++b) {
            const auto& z = f.values[a * f.n2 + b];
            std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g\n",
                          static_cast<long long>(f.lo1 + static_cast<std::int64_t>(a)),
                          static_cast<long long>(f.lo2 + static_cast<std::int64_t>(b)),
                          z.real(), z.imag());
            os << buf;
        }
}

namespace detail {

constexpr char signal_magic[5] = {'C', 'L', 'A', 'B', '1'};

template <typename T>
void put(std::ostream& os, T v) {
    static_assert(std::numeric_limits<unsigned char>::digits == 8);
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));  // little-endian host
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!is) throw std::runtime_error("signal binary: truncated stream");
    return v;
}

inline void put_values(std::ostream& os, const std::vector<std::complex<double>>& v) {
    for (const auto& z : v) {
        put(os, z.real());
        put(os, z.imag());
    }
}

inline void get_values(std::istream& is, std::vector<std::complex<double>>& v) {
    for (auto& z : v) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        z = {re, im};
    }
}

inline void check_magic(std::istream& is) {
    char m[5];
    is.read(m, 5);
    if (!is || std::memcmp(m, signal_magic, 5) != 0)
        throw std::runtime_error("signal binary: bad magic");
}

}  // namespace detail

inline void write_binary(const Signal1D& f, std::ostream& os) {
    os.write(detail::signal_magic, 5);
    detail::put<std::uint8_t>(os, 1);
    detail::put<std::int64_t>(os, f.lo);
    detail::put<std::uint64_t>(os, f.values.size());
    detail::put_values(os, f.values);
}

inline void write_binary(const Signal2D& f, std::ostream& os) {
    os.write(detail::signal_magic, 5);
    detail::put<std::uint8_t>(os, 2);
    detail::put<std::int64_t>(os, f.lo1);
    detail::put<std::uint64_t>(os, f.n1);
    detail::put<std::int64_t>(os, f.lo2);
    detail::put<std::uint64_t>(os, f.n2);
    detail::put_values(os, f.values);
}

inline std::uint8_t peek_binary_dim(std::istream& is) {
    detail::check_magic(is);
    return detail::get<std::uint8_t>(is);
}

// call after peek_binary_dim returned 1
inline Signal1D read_binary_1d(std::istream& is) {
    Signal1D f;
    f.lo = detail::get<std::int64_t>(is);
    f.values.resize(detail::get<std::uint64_t>(is));
    detail::get_values(is, f.values);
    return f;
}

inline Signal2D read_binary_2d(std::istream& is) {
    Signal2D f;
    f.lo1 = detail::get<std::int64_t>(is);
    f.n1 = detail::get<std::uint64_t>(is);
    f.lo2 = detail::get<std::int64_t>(is);
    f.n2 = detail::get<std::uint64_t>(is);
    f.values.resize(f.n1 * f.n2);
    detail::get_values(is, f.values);
    return f;
}

}  // namespace carlab
