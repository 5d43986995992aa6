// Acceptance gate: one pass/fail line per criterion, exit nonzero on any
// failure. Tolerances are pinned; reduced-scale substitutions are noted inline.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "carlab/expsum.hpp"
#include "carlab/fft.hpp"
#include "carlab/harness.hpp"
#include "carlab/operators.hpp"
#include "carlab/variation.hpp"

// family baselines recorded from the first run of this binary (seeded, so the
// values are reproducible); the check guards against >10% regressions
#ifndef CARLAB_SOBOLEV_BASELINE_8
#define CARLAB_SOBOLEV_BASELINE_8 0.4252
#endif
#ifndef CARLAB_SOBOLEV_BASELINE_10
#define CARLAB_SOBOLEV_BASELINE_10 0.4160
#endif
#ifndef CARLAB_SOBOLEV_BASELINE_12
#define CARLAB_SOBOLEV_BASELINE_12 0.4182
#endif

using namespace carlab;

namespace {

int failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail = {}) {
    std::printf("criterion %2d [%s]: %s%s%s\n", idx, ok ? "PASS" : "FAIL", what,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// ---- 1: multiplier symmetries ---------------------------------------------
void criterion1() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int j = 4; j <= 14; ++j) {
        const double tol = 1e-12 * std::exp2(j);
        for (int i = 0; i < 100; ++i) {
            const double xi = uniform(rng, -0.5, 0.5);
            const double lam = uniform(rng, -0.5, 0.5);
            const double anti = std::abs(m_j(j, xi, lam, SignMode::even, 1.5) +
                                         m_j(j, -xi, lam, SignMode::even, 1.5));
            const double re = std::abs(m_j(j, xi, lam, SignMode::odd, 1.5).real());
            worst = std::max(worst, std::max(anti, re) / tol);
        }
    }
    report(1, "multiplier symmetries (oddness in xi, imaginary odd mode)", worst <= 1.0,
           fmt("worst/tol = %.3g", worst));
}

// ---- 2: partition of unity ------------------------------------------------
void criterion2() {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double x = std::exp2(uniform(rng, 0.0, 18.0));
        if (rng() & 1) x = -x;
        KahanSum<double> s;
        for (int j = 1; j <= 20; ++j) s.add(window_value(j, x));
        worst = std::max(worst, std::abs(s.value() - 1.0 / x));
    }
    report(2, "dyadic windows telescope to 1/x", worst <= 1e-12, fmt("max err = %.3g", worst));
}

// ---- 3,4,5: decay sweeps --------------------------------------------------
void criterion3() {
    ExperimentConfig cfg;  // j in [8,16], grid 64
    const auto rec = sweep_minor_box(cfg);
    report(3, "off-box multiplier maxima decay", rec.pass,
           fmt("slope = %.4f (<= -0.025), R^2 = %.3f (>= 0.7)", rec.fit.slope,
               rec.fit.rSquared));
}

void criterion4() {
    ExperimentConfig cfg;
    cfg.jMax = 14;
    const auto rec = sweep_error_term(cfg);
    // quadrature self-check at representative points per scale
    bool quadOk = true;
    QuadratureSpec strict;
    strict.selfCheck = true;
    for (int j = 8; j <= 14; j += 2) {
        const MajorBox box(j, cfg.params);
        for (const double xi : {box.xiHalfWidth, 8.0 * box.xiHalfWidth, 0.3}) {
            const auto a = H_j(j, xi, box.lambdaHalfWidth, SignMode::even, cfg.params.c);
            try {
                const auto b =
                    H_j(j, xi, box.lambdaHalfWidth, SignMode::even, cfg.params.c, strict);
                quadOk = quadOk && std::abs(a - b) <= 1e-9;
            } catch (const QuadratureError&) {
                quadOk = false;
            }
        }
    }
    report(4, "approximation error maxima decay + quadrature self-check",
           rec.pass && quadOk, fmt("slope = %.4f (<= -0.025), quad ok = %.0f",
                                   rec.fit.slope, quadOk ? 1.0 : 0.0));
}

void criterion5() {
    ExperimentConfig cfg;  // k in [8,18]
    const auto rec = sweep_kt_difference(cfg);
    report(5, "orbit multiplier vs continuous average proximity decay", rec.pass,
           fmt("slope = %.4f (<= -0.025)", rec.fit.slope));
}

// ---- 6: exponential-sum envelope stability --------------------------------
void criterion6() {
    std::mt19937_64 rng(106);
    double cSub = 0.0, cFull = 0.0;
    for (int i = 0; i < 500; ++i) {
        // log-uniform N keeps the small-N subsample populated
        const auto N = static_cast<std::int64_t>(std::exp2(uniform(rng, 0.0, 20.0)));
        const double xi1 = uniform(rng, -0.5, 0.5);
        const double xi2 = uniform(rng, -0.5, 0.5);
        if (xi1 == 0.0 && xi2 == 0.0) continue;
        const auto M = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::pow(static_cast<double>(N), 0.5 / 3.0)));
        const double ratio =
            std::abs(exp_sum(N, xi1, xi2, 1.5)) / bound_full(N, M, xi1, xi2, 1.5).value;
        cFull = std::max(cFull, ratio);
        if (N <= (1 << 14)) cSub = std::max(cSub, ratio);
    }
    const bool ok = std::isfinite(cFull) && cFull <= 1.2 * cSub;
    report(6, "exponential-sum envelope constant is stable in N", ok,
           fmt("C(N<=2^14) = %.4g, C(N<=2^20) = %.4g", cSub, cFull));
}

// ---- 7: lambda-derivative bound -------------------------------------------
void criterion7() {
    std::mt19937_64 rng(107);
    double worstRatio = 0.0;
    for (int j = 6; j <= 16; ++j) {
        for (int i = 0; i < 100; ++i) {
            const double xi = uniform(rng, -0.5, 0.5);
            const double lam = uniform(rng, -0.5, 0.5);
            const double d = std::abs(dlambda_m_j(j, xi, lam, SignMode::even, 1.5));
            worstRatio = std::max(worstRatio, d / std::exp2(1.5 * j));
        }
    }
    // central differences only resolve the derivative while h 2^{cj} stays
    // tiny; checked at the small scales where that holds
    double worstFd = 0.0;
    std::mt19937_64 rng2(1071);
    const double h = 1e-6;
    for (int j = 6; j <= 7; ++j) {
        for (int i = 0; i < 20; ++i) {
            const double xi = uniform(rng2, -0.5, 0.5);
            const double lam = uniform(rng2, -0.4, 0.4);
            const auto an = dlambda_m_j(j, xi, lam, SignMode::even, 1.5);
            const auto fd = (m_j(j, xi, lam + h, SignMode::even, 1.5) -
                             m_j(j, xi, lam - h, SignMode::even, 1.5)) /
                            (2.0 * h);
            if (std::abs(an) > 1e-6)
                worstFd = std::max(worstFd, std::abs(fd - an) / std::abs(an));
        }
    }
    report(7, "lambda-derivative growth bound + finite-difference agreement",
           worstRatio <= 10.0 && worstFd <= 1e-4,
           fmt("max |d m_j|/2^{cj} = %.3f, fd rel err = %.3g", worstRatio, worstFd));
}

// ---- 8: r-variation oracle ------------------------------------------------
double variation_brute(const std::vector<std::complex<double>>& a, double r) {
    const std::size_t n = a.size();
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) < 2) continue;
        double s = 0.0;
        int prev = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            if (prev >= 0) s += std::pow(std::abs(a[i] - a[static_cast<std::size_t>(prev)]), r);
            prev = static_cast<int>(i);
        }
        best = std::max(best, s);
    }
    return std::pow(best, 1.0 / r);
}

void criterion8() {
    std::mt19937_64 rng(108);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng() % 7;
        std::vector<std::complex<double>> a(n);
        for (auto& z : a) z = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
        for (const double r : {1.0, 2.0, 2.5, 4.0})
            worst = std::max(worst,
                             std::abs(r_variation(a, r).value - variation_brute(a, r)));
    }
    report(8, "variation DP equals exhaustive enumeration", worst <= 1e-12,
           fmt("max gap = %.3g", worst));
}

// ---- 9: convolution oracle ------------------------------------------------
void criterion9() {
    std::mt19937_64 rng(109);
    double worst = 0.0;
    for (const std::size_t n : {std::size_t{256}, std::size_t{4096}}) {
        Signal1D f(-static_cast<std::int64_t>(n) / 2, n);
        for (auto& z : f.values) z = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const auto a = modulated_convolution(f, 0.2718, SignMode::odd, 1.5, ConvPath::direct);
        const auto b = modulated_convolution(f, 0.2718, SignMode::odd, 1.5, ConvPath::fft);
        for (std::size_t k = 0; k < a.size(); ++k)
            worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
    }
    report(9, "fft and direct convolution paths agree", worst <= 1e-10,
           fmt("max abs gap = %.3g (support up to 2^12)", worst));
}

// ---- 10: Carleson impulse closed form -------------------------------------
void criterion10() {
    const auto f = Signal1D::impulse(0);
    LambdaGrid grid;
    grid.points = {0.0, 0.3};
    const auto res = carleson_maximal(f, SignMode::even, 1.5, grid, ConvPath::direct,
                                      std::int64_t{1} << 20);
    const double norm = lp_norm(res.magnitudes, 2.0);
    const double target = std::sqrt(std::numbers::pi * std::numbers::pi / 3.0);
    // lambda-independence of the impulse output magnitude (ulp-level: the
    // magnitude is computed through hypot, exact cancellation is one ulp off)
    const auto c0 = modulated_convolution(f, 0.0, SignMode::even, 1.5, ConvPath::direct,
                                          std::int64_t{1} << 12);
    const auto c1 = modulated_convolution(f, 0.37, SignMode::even, 1.5, ConvPath::direct,
                                          std::int64_t{1} << 12);
    double worstRel = 0.0;
    for (std::size_t k = 0; k < c0.size(); ++k) {
        const double a = std::abs(c0.values[k]), b = std::abs(c1.values[k]);
        if (a > 0.0) worstRel = std::max(worstRel, std::abs(a - b) / a);
    }
    report(10, "impulse maximal norm sqrt(pi^2/3) + modulation-independence",
           std::abs(norm - target) <= 1e-6 && worstRel <= 1e-15,
           fmt("norm err = %.3g, magnitude rel gap = %.3g", std::abs(norm - target),
               worstRel));
}

// ---- 11: l2-stability across supports -------------------------------------
void criterion11() {
    // identical coarse lambda grid for both supports; the spec's resolution
    // rule tied to N^c is infeasible at 2^14, recorded as a substitution
    const auto grid = LambdaGrid::uniform(1.0 / 64.0);
    std::mt19937_64 rng(111);
    std::vector<double> growth;
    for (int trial = 0; trial < 20; ++trial) {
        double ratio[2] = {0.0, 0.0};
        int slot = 0;
        for (const int logN : {10, 14}) {
            const auto n = std::size_t{1} << logN;
            Signal1D f(-static_cast<std::int64_t>(n) / 2, n);
            for (auto& z : f.values) z = {(rng() & 1) ? 1.0 : -1.0, 0.0};
            const auto res = carleson_maximal(f, SignMode::even, 1.5, grid, ConvPath::fft);
            ratio[slot++] = lp_norm(res.magnitudes, 2.0) / lp_norm(f, 2.0);
        }
        growth.push_back(ratio[1] / ratio[0]);
    }
    std::nth_element(growth.begin(), growth.begin() + 10, growth.end());
    const double median = growth[10];
    report(11, "maximal-operator l2 ratio stable from support 2^10 to 2^14",
           median <= 1.25, fmt("median growth = %.4f (<= 1.25)", median));
}

// ---- 12: TT* envelopes ----------------------------------------------------
void criterion12() {
    ExperimentConfig cfg;
    const auto disc = sweep_ttstar(cfg);
    const auto cont = sweep_ttstar_continuous(cfg);
    report(12, "kernel far-zone decay exponents positive, constants stable",
           disc.record.pass && cont.record.pass,
           fmt("rho4 = %.4f, drift = %.2fx, continuous rho = %.3f", disc.rho,
               disc.cEmpMax / disc.cEmpMin, cont.rho));
}

// ---- 13: Sobolev-type embedding check -------------------------------------
void criterion13() {
    std::mt19937_64 rng(113);
    const std::size_t nx = 24, nt = 65;
    std::vector<std::complex<double>> g(nx);
    for (auto& z : g) z = {uniform(rng, -1, 1), 0.0};
    std::vector<std::vector<std::complex<double>>> constant(
        nt, std::vector<std::complex<double>>(g.begin(), g.end()));
    const auto rc = sobolev_check(constant, 0.0, 1.0);
    std::vector<std::vector<std::complex<double>>> linear(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        linear[t].resize(nx);
        for (std::size_t x = 0; x < nx; ++x)
            linear[t][x] = g[x] * (static_cast<double>(t) / static_cast<double>(nt - 1));
    }
    const auto rl = sobolev_check(linear, 0.0, 1.0);
    // E_j-family over the small-frequency window; baselines recorded from the
    // pinned seed at first acceptance run, re-checked within +-10%
    const double baseline[3] = {CARLAB_SOBOLEV_BASELINE_8, CARLAB_SOBOLEV_BASELINE_10,
                                CARLAB_SOBOLEV_BASELINE_12};
    bool famOk = true;
    std::string famDetail;
    const std::size_t nxF = 32, ntF = 33;
    std::vector<std::complex<double>> f(nxF), fhat;
    for (auto& z : f) z = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    fhat = f;
    fft_inplace(fhat, false);
    int bi = 0;
    for (const int j : {8, 10, 12}) {
        const double lamMax = std::exp2((-1.5 + 0.019) * j);
        std::vector<std::vector<std::complex<double>>> fam(ntF);
        for (std::size_t ti = 0; ti < ntF; ++ti) {
            const double lam =
                -lamMax + 2.0 * lamMax * static_cast<double>(ti) /
                              static_cast<double>(ntF - 1);
            std::vector<std::complex<double>> spec(nxF);
            for (std::size_t k = 0; k < nxF; ++k) {
                double xi = static_cast<double>(k) / static_cast<double>(nxF);
                if (xi >= 0.5) xi -= 1.0;
                spec[k] = fhat[k] * E_j(j, xi, lam, SignMode::even, 1.5);
            }
            fft_inplace(spec, true);
            fam[ti] = std::move(spec);
        }
        const auto r = sobolev_check(fam, -lamMax, lamMax);
        famOk = famOk && r.ratio <= baseline[bi] * 1.10;
        famDetail += fmt("j%.0f:%.4f ", static_cast<double>(j), r.ratio);
        ++bi;
    }
    report(13, "embedding fixtures (ratios 1, 1/2) + family baseline",
           std::abs(rc.ratio - 1.0) <= 1e-6 && std::abs(rl.ratio - 0.5) <= 1e-6 && famOk,
           fmt("fixture ratios %.8f, %.8f; ", rc.ratio, rl.ratio) + famDetail);
}

// ---- 14: determinism ------------------------------------------------------
void criterion14() {
    // reduced-scale suite so the doubled run fits the time budget; byte
    // identity is what is being exercised, not the decay values
    ExperimentConfig cfg;
    cfg.jMin = 6;
    cfg.jMax = 9;
    cfg.kMin = 4;
    cfg.kMax = 8;
    cfg.grid = 8;
    cfg.seed = 0;
    cfg.deterministic = true;
    auto runSuite = [&] {
        Report rep;
        rep.config = cfg;
        rep.versions["carlab"] = "1.0.0";
        rep.sweeps.push_back(sweep_minor_box(cfg));
        rep.sweeps.push_back(sweep_error_term(cfg));
        rep.sweeps.push_back(sweep_kt_difference(cfg));
        rep.sweeps.push_back(sweep_ttstar(cfg, {6, 7, 8, 9}, 100).record);
        rep.timings["suite"] = 0.0;
        std::string out = report_json(rep).dump(2);
        for (const auto& s : rep.sweeps) {
            std::ostringstream csv;
            write_sweep_csv(s, csv);
            out += csv.str();
        }
        return out;
    };
    const auto a = runSuite();
    const auto b = runSuite();
    report(14, "byte-identical reports across serial reruns (seed 0)", a == b,
           fmt("bytes = %.0f", static_cast<double>(a.size())));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    criterion13();
    criterion14();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::printf("%d/14 criteria passed in %.1f s\n", 14 - failures, dt.count());
    return failures == 0 ? 0 : 1;
}
