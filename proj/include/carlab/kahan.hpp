#pragma once

#include <complex>

namespace carlab {

// Kahan compensated accumulator. Serial summation with this accumulator is
// the bit-stable baseline all parallel reductions are compared against.
template <typename T>
struct KahanSum {
    T sum{};
    T comp{};

    void add(T value) {
        const T y = value - comp;
        const T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    KahanSum& operator+=(T value) {
        add(value);
        return *this;
    }

    T value() const { return sum; }
};

// Complex sums are accumulated component-wise so the compensation is not
// polluted by cross-component rounding.
struct KahanComplexSum {
    KahanSum<double> re;
    KahanSum<double> im;

    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }

    std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace carlab
