#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "carlab/multiplier.hpp"

using namespace carlab;
using Catch::Approx;

namespace {
double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}
}  // namespace

TEST_CASE("oscillatory_integral polynomial and oscillatory closed forms") {
    const auto p = oscillatory_integral([](double x) { return std::complex<double>(x * x * x * x * x, 0.0); },
                                        0.0, 1.0, 0.0);
    CHECK(p.real() == Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(p.imag() == Approx(0.0).margin(1e-15));
    // int_0^1 e(xi x) dx = (e(xi) - 1) / (2 pi i xi)
    const double xi = 37.25;
    const auto v = oscillatory_integral([&](double x) { return unit_phase(xi * x); }, 0.0, 1.0,
                                        xi);
    const auto exact = (unit_phase(xi) - std::complex<double>(1, 0)) /
                       std::complex<double>(0.0, two_pi * xi);
    CHECK(std::abs(v - exact) < 1e-13);
}

TEST_CASE("oscillatory_integral self-check agrees and can fail loudly") {
    QuadratureSpec strict;
    strict.selfCheck = true;
    const double xi = 11.5;
    const auto a = oscillatory_integral([&](double x) { return unit_phase(xi * x); }, 0.0, 2.0,
                                        xi);
    const auto b = oscillatory_integral([&](double x) { return unit_phase(xi * x); }, 0.0, 2.0,
                                        xi, strict);
    CHECK(std::abs(a - b) < 1e-9);
    // lie about the frequency and under-resolve: the doubled-panel pass disagrees
    QuadratureSpec sloppy;
    sloppy.selfCheck = true;
    sloppy.panelMaxLength = 1.0;
    CHECK_THROWS_AS(oscillatory_integral([](double x) { return unit_phase(900.0 * x); }, 0.0,
                                         2.0, 0.0, sloppy),
                    QuadratureError);
}

TEST_CASE("box membership thresholds") {
    ParamSet p;  // eps = 0.2, c = 1.5
    // j = 10: |xi| <= 2^-6, |lambda| <= 2^-13, boundaries included
    CHECK(in_major_box(10, std::exp2(-6.0), std::exp2(-13.0), p));
    CHECK_FALSE(in_major_box(10, std::nextafter(std::exp2(-6.0), 1.0), 0.0, p));
    CHECK_FALSE(in_major_box(10, 0.0, std::nextafter(std::exp2(-13.0), 1.0), p));
    CHECK(in_ergodic_box(1024.0, std::pow(1024.0, -0.6), 0.0, p));
    CHECK_FALSE(in_ergodic_box(1024.0, 1.001 * std::pow(1024.0, -0.6), 0.0, p));
    CHECK(in_ergodic_box(1024.0, 0.0, std::pow(1024.0, -1.3), p));
}

TEST_CASE("X_j complement boundary is closed") {
    ParamSet p;  // nu = 0.019
    const int j = 12;
    const double thr = std::exp2((-p.c + p.nu) * j);
    CHECK_FALSE(X_j_complement_test(j, thr, p));
    CHECK_FALSE(X_j_complement_test(j, -thr, p));
    CHECK(X_j_complement_test(j, std::nextafter(thr, 1.0), p));
}

TEST_CASE("m_j golden value") {
    const auto v = m_j(6, 0.1, 0.01, SignMode::even, 1.5);
    CHECK(v.real() == Approx(0.43916700236662666665).epsilon(1e-12));
    CHECK(v.imag() == Approx(0.037498108746908506047).epsilon(1e-12));
}

TEST_CASE("m_j symmetries") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 25; ++i) {
        const int j = 5 + static_cast<int>(rng() % 5);
        const double xi = uniform(rng, -0.5, 0.5);
        const double lam = uniform(rng, -0.01, 0.01);
        // even mode: odd in xi
        const auto a = m_j(j, xi, lam, SignMode::even, 1.5);
        const auto b = m_j(j, -xi, lam, SignMode::even, 1.5);
        CHECK(std::abs(a + b) < 1e-12);
        // odd mode: purely imaginary
        const auto c = m_j(j, xi, lam, SignMode::odd, 1.5);
        CHECK(std::abs(c.real()) < 1e-13);
    }
}

TEST_CASE("dlambda_m_j golden and finite-difference agreement") {
    // at xi = 0, lambda = 0, odd mode the derivative is 4 pi i sum floor(n^c) psi_j(n)
    const auto d0 = dlambda_m_j(6, 0.0, 0.0, SignMode::odd, 1.5);
    CHECK(d0.real() == Approx(0.0).margin(1e-12));
    CHECK(d0.imag() == Approx(636.42194743350109861).epsilon(1e-12));
    const double h = 1e-6;
    const auto fd = (m_j(6, 0.1, 0.01 + h, SignMode::even, 1.5) -
                     m_j(6, 0.1, 0.01 - h, SignMode::even, 1.5)) /
                    (2.0 * h);
    const auto an = dlambda_m_j(6, 0.1, 0.01, SignMode::even, 1.5);
    CHECK(std::abs(fd - an) <= 1e-3 * std::abs(an));
}

TEST_CASE("H_j and E_j golden values") {
    const auto h = H_j(6, 0.1, 0.01, SignMode::even, 1.5);
    CHECK(h.real() == Approx(0.43014009995568141909).epsilon(1e-9));
    CHECK(h.imag() == Approx(0.047401279529231960167).epsilon(1e-9));
    const auto e = E_j(6, 0.1, 0.01, SignMode::even, 1.5);
    CHECK(e.real() == Approx(0.0090269024109452475612).epsilon(1e-7));
    CHECK(e.imag() == Approx(-0.00990317078232345412).epsilon(1e-7));
    // cutoff kills H_j outside the unit frequency box
    CHECK(H_j(6, 0.6, 0.0, SignMode::even, 1.5) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("H_j quadrature is stable under panel refinement") {
    QuadratureSpec strict;
    strict.selfCheck = true;
    const auto a = H_j(9, 0.02, 1e-4, SignMode::odd, 1.5);
    const auto b = H_j(9, 0.02, 1e-4, SignMode::odd, 1.5, strict);
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("k_t values") {
    // floors (1,2,5): conjugate of the exp_sum small case, divided by t
    const auto v = k_t(3, -0.25, -0.5, 1.5);
    CHECK(std::abs(v - std::complex<double>(-1.0 / 3.0, 0.0)) < 1e-14);
    CHECK(std::abs(k_t(10, 0.0, 0.0, 1.5) - std::complex<double>(1, 0)) < 1e-15);
    CHECK_THROWS_AS(k_t(0, 0.1, 0.1, 1.5), std::domain_error);
}

TEST_CASE("L_t closed form at xi2 = 0 and golden value") {
    // (1/t)(1 - e(-xi1 t)) / (2 pi i xi1)
    const auto v = L_t(8.0, 0.3, 0.0, 1.5);
    CHECK(v.real() == Approx(0.038978720157859959717).epsilon(1e-11));
    CHECK(v.imag() == Approx(-0.11996416533000679251).epsilon(1e-11));
    const auto w = L_t(64.0, 0.1, 0.01, 1.5);
    CHECK(w.real() == Approx(0.00065490060289463688565).margin(1e-11));
    CHECK(w.imag() == Approx(-0.033312673816068875968).epsilon(1e-9));
    CHECK(std::abs(L_t(16.0, 0.0, 0.0, 1.5) - std::complex<double>(1, 0)) < 1e-12);
    CHECK_THROWS_AS(L_t(0.0, 0.1, 0.1, 1.5), std::domain_error);
}

TEST_CASE("k_t approaches L_t inside the ergodic box") {
    // fixed admissible frequencies, growing t: |k_t - L_t| shrinks
    const double xi1 = 1e-4, xi2 = 1e-7;
    const double d1 = std::abs(k_t(1 << 8, xi1, xi2, 1.5) - L_t(256.0, xi1, xi2, 1.5));
    const double d2 = std::abs(k_t(1 << 12, xi1, xi2, 1.5) - L_t(4096.0, xi1, xi2, 1.5));
    CHECK(d2 < d1);
    CHECK(d2 < 1e-2);
}

TEST_CASE("MultiplierGrid csv round-trip format") {
    MultiplierGrid g;
    g.points.push_back({64.0, 0.1, 0.01, {0.5, -0.25}, true});
    std::ostringstream os;
    g.write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "scale,xi,lambda,re,im,abs,in_box");
    std::getline(is, line);
    CHECK(line.substr(0, 3) == "64,");
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
    CHECK(line.substr(line.size() - 2) == ",1");
}
