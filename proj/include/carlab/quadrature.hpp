#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "carlab/kahan.hpp"

namespace carlab {

// Panel-adaptive oscillatory quadrature. Panels are sized so the phase
// advances at most 1/8 of a cycle per panel; 16-node Gauss-Legendre handles
// that with large margin. selfCheck re-integrates with halved panels and
// compares.
struct QuadratureSpec {
    double panelMaxLength = 0.0;  // 0: derive from support length / 64
    int nodesPerPanel = 16;
    double refinementTolerance = 1e-9;
    bool selfCheck = false;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct GLNode {
    double x, w;
};

inline constexpr std::array<GLNode, 16> gl16 = {{
    {-9.89400934991649939e-01, 2.71524594117540374e-02},
    {-9.44575023073232600e-01, 6.22535239386477063e-02},
    {-8.65631202387831755e-01, 9.51585116824925914e-02},
    {-7.55404408355002999e-01, 1.24628971255534030e-01},
    {-6.17876244402643771e-01, 1.49595988816576764e-01},
    {-4.58016777657227370e-01, 1.69156519395002619e-01},
    {-2.81603550779258915e-01, 1.82603415044923612e-01},
    {-9.50125098376374544e-02, 1.89450610455068585e-01},
    {9.50125098376374544e-02, 1.89450610455068585e-01},
    {2.81603550779258915e-01, 1.82603415044923612e-01},
    {4.58016777657227370e-01, 1.69156519395002619e-01},
    {6.17876244402643771e-01, 1.49595988816576764e-01},
    {7.55404408355002999e-01, 1.24628971255534030e-01},
    {8.65631202387831755e-01, 9.51585116824925914e-02},
    {9.44575023073232600e-01, 6.22535239386477063e-02},
    {9.89400934991649939e-01, 2.71524594117540374e-02},
}};

template <typename F>
std::complex<double> panels(F&& f, double a, double b, std::int64_t nPanels) {
    const double h = (b - a) / static_cast<double>(nPanels);
    KahanComplexSum acc;
    for (std::int64_t p = 0; p < nPanels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        const double half = 0.5 * h;
        for (const auto& node : gl16) {
            const std::complex<double> v = f(mid + half * node.x);
            acc.add(v * (node.w * half));
        }
    }
    return acc.value();
}

}  // namespace detail

// Integrate f over [a,b]. freqBound is an upper bound on the phase
// derivative (cycles per unit length) of the integrand; the panel length is
// min(spec-or-default cap, 1/(8 freqBound)).
template <typename F>
std::complex<double> oscillatory_integral(F&& f, double a, double b, double freqBound,
                                          const QuadratureSpec& spec = {}) {
    if (b <= a) return {0.0, 0.0};
    const double len = b - a;
    double panelLen = spec.panelMaxLength > 0.0 ? spec.panelMaxLength : len / 64.0;
    if (freqBound > 0.0) panelLen = std::min(panelLen, 1.0 / (8.0 * freqBound));
    std::int64_t nPanels = static_cast<std::int64_t>(std::ceil(len / panelLen));
    if (nPanels < 1) nPanels = 1;
    const std::complex<double> coarse = detail::panels(f, a, b, nPanels);
    if (spec.selfCheck) {
        const std::complex<double> fine = detail::panels(f, a, b, 2 * nPanels);
        const double scale = std::max(std::abs(fine), 1.0);
        if (std::abs(fine - coarse) > spec.refinementTolerance * scale)
            throw QuadratureError("oscillatory_integral: refinement disagreement " +
                                  std::to_string(std::abs(fine - coarse) / scale) + " on [" +
                                  std::to_string(a) + "," + std::to_string(b) + "]");
        return fine;
    }
    return coarse;
}

}  // namespace carlab
