#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace carlab {

// Admissible exponent/threshold bundle. Every range check lives here so the
// CLI and the sweeps reject bad configurations with the same message.
struct ParamSet {
    double c = 1.5;
    double eps = 0.2;
    double nu = 0.019;
    double delta1 = 0.12;
    double delta2 = 1.8e-4;
    double nuPrime = 9e-3;

    // Returns an empty string when admissible, otherwise the violated constraint.
    std::string violation() const {
        if (!(c > 1.0 && c < 2.0)) return "c must lie in (1,2)";
        if (!(eps > 0.0 && eps < std::min(0.25, 2.0 - c)))
            return "eps must lie in (0, min{1/4, 2-c})";
        if (!(nu > 0.0 && nu < eps / 10.0)) return "nu must lie in (0, eps/10)";
        if (!(delta1 > 0.0 && delta1 < (2.0 - c) / 4.0))
            return "delta1 must lie in (0, (2-c)/4)";
        if (!(delta2 > 0.0 && delta2 < std::min(nu / 100.0, (2.0 - c) / 100.0)))
            return "delta2 must lie in (0, min{nu/100, (2-c)/100})";
        if (!(nuPrime > delta2 && nuPrime < std::min(nu / 2.0, (2.0 - c) / 2.0)))
            return "nuPrime must lie in (delta2, min{nu/2, (2-c)/2})";
        return {};
    }

    bool admissible() const { return violation().empty(); }

    void validate() const {
        auto v = violation();
        if (!v.empty()) throw std::domain_error("ParamSet: " + v);
    }
};

// Phase parity selector: mode 0 is the even phase |t|^c, mode 1 the signed
// phase sign(t)|t|^c.
enum class SignMode : int { even = 0, odd = 1 };

inline int mode_index(SignMode m) { return static_cast<int>(m); }

// Half-line restriction of the dyadic window.
enum class SignHalf { plus, minus };

}  // namespace carlab
