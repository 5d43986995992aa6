#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "carlab/fit.hpp"
#include "carlab/multiplier.hpp"
#include "carlab/params.hpp"
#include "carlab/signal.hpp"
#include "carlab/ttstar.hpp"

namespace carlab {

struct ExperimentConfig {
    ParamSet params;
    int jMin = 8;
    int jMax = 16;
    int kMin = 8;   // t = 2^k scales
    int kMax = 18;
    int grid = 64;  // samples per frequency axis
    std::uint64_t seed = 0;
    int threads = 1;
    bool deterministic = false;  // zero out wall-clock timings in reports
    std::string outPath;
    std::string format = "json";
};

inline void to_json(nlohmann::ordered_json& j, const ExperimentConfig& cfg) {
    j = {{"c", cfg.params.c},           {"eps", cfg.params.eps},
         {"nu", cfg.params.nu},         {"delta1", cfg.params.delta1},
         {"delta2", cfg.params.delta2}, {"nuprime", cfg.params.nuPrime},
         {"jmin", cfg.jMin},            {"jmax", cfg.jMax},
         {"kmin", cfg.kMin},            {"kmax", cfg.kMax},
         {"grid", cfg.grid},            {"seed", cfg.seed},
         {"threads", cfg.threads},      {"deterministic", cfg.deterministic},
         {"out", cfg.outPath},          {"format", cfg.format}};
}

inline void from_json(const nlohmann::ordered_json& j, ExperimentConfig& cfg) {
    cfg.params.c = j.value("c", cfg.params.c);
    cfg.params.eps = j.value("eps", cfg.params.eps);
    cfg.params.nu = j.value("nu", cfg.params.nu);
    cfg.params.delta1 = j.value("delta1", cfg.params.delta1);
    cfg.params.delta2 = j.value("delta2", cfg.params.delta2);
    cfg.params.nuPrime = j.value("nuprime", cfg.params.nuPrime);
    cfg.jMin = j.value("jmin", cfg.jMin);
    cfg.jMax = j.value("jmax", cfg.jMax);
    cfg.kMin = j.value("kmin", cfg.kMin);
    cfg.kMax = j.value("kmax", cfg.kMax);
    cfg.grid = j.value("grid", cfg.grid);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.deterministic = j.value("deterministic", cfg.deterministic);
    cfg.outPath = j.value("out", cfg.outPath);
    cfg.format = j.value("format", cfg.format);
}

struct SweepRecord {
    std::string name;
    std::string paperRef;  // which estimate the sweep quantifies
    std::vector<int> scaleIndex;
    std::vector<double> maxValue;
    DecayFit fit;
    bool pass = false;
    std::string criterion;
};

namespace detail {

// deterministic slot-per-index parallel map; order-independent results only
template <typename F>
void parallel_for(std::size_t n, int threads, F&& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const auto workers = static_cast<std::size_t>(threads);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    for (auto& t : pool) t.join();
}

// 0 and +- log-spaced magnitudes on [threshold * 2^{-span}, min(threshold * 2^{span}, cap)]
inline std::vector<double> straddle_axis(double threshold, int halfCount, double span,
                                         double cap = 0.5) {
    std::vector<double> out{0.0};
    const double lo = threshold * std::exp2(-span);
    const double hi = std::min(threshold * std::exp2(span), cap);
    for (int i = 0; i < halfCount; ++i) {
        const double f = halfCount == 1 ? 0.5
                                        : static_cast<double>(i) /
                                              static_cast<double>(halfCount - 1);
        const double mag = lo * std::pow(hi / lo, f);
        out.push_back(mag);
        out.push_back(-mag);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// per-j maxima of |m_j| outside the major box (both sign modes)
inline SweepRecord sweep_minor_box(const ExperimentConfig& cfg) {
    SweepRecord rec;
    rec.name = "minor-box";
    rec.paperRef = "off-box multiplier decay |m_j| <= C 2^{-eps j/4}";
    const auto& p = cfg.params;
    for (int j = cfg.jMin; j <= cfg.jMax; ++j) {
        const MajorBox box(j, p);
        // straddle the box thresholds and continue out to the full square
        const auto xis = detail::straddle_axis(
            box.xiHalfWidth, cfg.grid / 4,
            std::max(4.0, std::log2(0.5 / box.xiHalfWidth)));
        const auto lams = detail::straddle_axis(
            box.lambdaHalfWidth, cfg.grid / 4,
            std::max(4.0, std::log2(0.5 / box.lambdaHalfWidth)));
        std::vector<std::pair<double, double>> points;
        for (const double xi : xis)
            for (const double lam : lams)
                if (!box.contains(xi, lam)) points.emplace_back(xi, lam);
        std::vector<double> vals(points.size(), 0.0);
        detail::parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
            const auto [xi, lam] = points[i];
            vals[i] = std::max(std::abs(m_j(j, xi, lam, SignMode::even, p.c)),
                               std::abs(m_j(j, xi, lam, SignMode::odd, p.c)));
        });
        rec.scaleIndex.push_back(j);
        rec.maxValue.push_back(*std::max_element(vals.begin(), vals.end()));
    }
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < rec.scaleIndex.size(); ++i)
        pts.emplace_back(rec.scaleIndex[i], rec.maxValue[i]);
    rec.fit = decay_fit(pts);
    rec.criterion = "slope <= -eps/8 and R^2 >= 0.7";
    rec.pass = rec.fit.slope <= -p.eps / 8.0 && rec.fit.rSquared >= 0.7;
    return rec;
}

// per-j maxima of |E_j| = |m_j - H_j| over a box-neighborhood grid
inline SweepRecord sweep_error_term(const ExperimentConfig& cfg) {
    SweepRecord rec;
    rec.name = "error-term";
    rec.paperRef = "multiplier approximation error sup|E_j| <= C 2^{-eps j/4}";
    const auto& p = cfg.params;
    for (int j = cfg.jMin; j <= cfg.jMax; ++j) {
        const MajorBox box(j, p);
        // |m_j| and |H_j| are both negligible far outside the box; sample the
        // straddling neighborhood where the approximation is meaningful
        const auto xis = detail::straddle_axis(box.xiHalfWidth, cfg.grid / 4, 4.0);
        const auto lams = detail::straddle_axis(box.lambdaHalfWidth, cfg.grid / 4, 4.0);
        std::vector<std::pair<double, double>> points;
        for (const double xi : xis)
            for (const double lam : lams) points.emplace_back(xi, lam);
        std::vector<double> vals(points.size(), 0.0);
        detail::parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
            const auto [xi, lam] = points[i];
            vals[i] = std::max(std::abs(E_j(j, xi, lam, SignMode::even, p.c)),
                               std::abs(E_j(j, xi, lam, SignMode::odd, p.c)));
        });
        rec.scaleIndex.push_back(j);
        rec.maxValue.push_back(*std::max_element(vals.begin(), vals.end()));
    }
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < rec.scaleIndex.size(); ++i)
        pts.emplace_back(rec.scaleIndex[i], rec.maxValue[i]);
    rec.fit = decay_fit(pts);
    rec.criterion = "slope <= -eps/8";
    rec.pass = rec.fit.slope <= -p.eps / 8.0;
    return rec;
}

// per-k maxima of |k_t - L_t| at t = 2^k over the ergodic-box neighborhood
inline SweepRecord sweep_kt_difference(const ExperimentConfig& cfg) {
    SweepRecord rec;
    rec.name = "kt-difference";
    rec.paperRef = "orbit multiplier proximity |k_t - L_t| <= C t^{-eps/4}";
    const auto& p = cfg.params;
    for (int k = cfg.kMin; k <= cfg.kMax; ++k) {
        const auto t = static_cast<std::int64_t>(1) << k;
        const ErgodicBox box(static_cast<double>(t), p);
        const auto xi1s = detail::straddle_axis(box.xi1HalfWidth, cfg.grid / 4, 4.0);
        const auto xi2s = detail::straddle_axis(box.xi2HalfWidth, cfg.grid / 4, 4.0);
        std::vector<std::pair<double, double>> points;
        for (const double a : xi1s)
            for (const double b : xi2s) points.emplace_back(a, b);
        std::vector<double> vals(points.size(), 0.0);
        detail::parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
            const auto [xi1, xi2] = points[i];
            vals[i] = std::abs(k_t(t, xi1, xi2, p.c) -
                               L_t(static_cast<double>(t), xi1, xi2, p.c));
        });
        rec.scaleIndex.push_back(k);
        rec.maxValue.push_back(*std::max_element(vals.begin(), vals.end()));
    }
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < rec.scaleIndex.size(); ++i)
        pts.emplace_back(rec.scaleIndex[i], rec.maxValue[i]);
    rec.fit = decay_fit(pts);
    rec.criterion = "slope <= -eps/8 (log2(t) scale steps)";
    rec.pass = rec.fit.slope <= -p.eps / 8.0;
    return rec;
}

struct KernelSweepRow {
    int j = 0;
    int r = 0;
    double x = 0.0;
    double y = 0.0;
    double absK = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

struct TTstarSweep {
    SweepRecord record;   // far-zone maxima per scale
    double rho = 0.0;     // fitted decay beyond the trivial 2^{-j} amplitude
    double cEmpMin = 0.0; // envelope-ratio extremes across scales (drift check)
    double cEmpMax = 0.0;
    std::vector<KernelSweepRow> table;
};

inline void write_kernel_sweep_csv(const std::vector<KernelSweepRow>& rows,
                                   std::ostream& os) {
    os << "j,r,x,y,abs_k,envelope,ratio\n";
    char buf[240];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.j, r.r,
                      r.x, r.y, r.absK, r.envelope, r.ratio);
        os << buf;
    }
}

// far-zone maxima of the discrete kernel under the three adversarial
// generators; rho4 fitted from the excess decay over 2^{-j}
inline TTstarSweep sweep_ttstar(const ExperimentConfig& cfg,
                                const std::vector<int>& scales = {8, 10, 12, 14},
                                int pairsPerScale = 1000) {
    TTstarSweep out;
    out.record.name = "ttstar-envelope";
    out.record.paperRef = "kernel far-zone decay |K_j(x,y)| <= C 2^{-(1+rho4) j}";
    const auto& p = cfg.params;
    out.cEmpMin = std::numeric_limits<double>::infinity();
    for (const int j : scales) {
        const int r = static_cast<int>(std::ceil(p.nu * j)) + 2;
        std::vector<ChoiceFunctions> choices;
        choices.push_back(constant_choice(j, r, p.c, 0.37));
        choices.push_back(iid_uniform_choice(j, r, p.c, cfg.seed + 1));
        choices.push_back(iid_uniform_choice(j, r, p.c, cfg.seed + 2));
        choices.push_back(resonant_choice(j, r, p.c, p, cfg.seed + 3));
        choices.push_back(resonant_choice(j, r, p.c, p, cfg.seed + 4));
        // the windows overlap only for |x-y| <= 3*2^{j-3}; treat the outer
        // half of that reach as the far zone
        const auto maxSep = static_cast<std::int64_t>(3 * std::ldexp(1.0, j - 3));
        const auto farLo = static_cast<std::int64_t>(std::ldexp(1.0, j - 2));
        const auto env = ttstar_envelope_discrete(j, p, 0.0);
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(j));
        std::vector<std::tuple<std::int64_t, std::int64_t, std::size_t>> pairs;
        for (int i = 0; i < pairsPerScale; ++i) {
            const auto x = static_cast<std::int64_t>(rng() % 256) - 128;
            const auto sep = static_cast<std::int64_t>(rng() % (2 * maxSep + 1)) - maxSep;
            pairs.emplace_back(x, x - sep, rng() % choices.size());
        }
        std::vector<KernelSweepRow> rows(pairs.size());
        detail::parallel_for(pairs.size(), cfg.threads, [&](std::size_t i) {
            const auto [x, y, ci] = pairs[i];
            const auto k =
                ttstar_kernel_discrete(x, y, j, r, SignHalf::minus, choices[ci], p.c, p);
            KernelSweepRow row;
            row.j = j;
            row.r = r;
            row.x = static_cast<double>(x);
            row.y = static_cast<double>(y);
            row.absK = std::abs(k);
            row.envelope = env.at(static_cast<double>(x - y));
            row.ratio = row.envelope > 0.0 ? row.absK / row.envelope : 0.0;
            rows[i] = row;
        });
        double farMax = 0.0, cEmp = 0.0;
        for (const auto& row : rows) {
            cEmp = std::max(cEmp, row.ratio);
            if (std::llabs(static_cast<std::int64_t>(row.x - row.y)) >= farLo)
                farMax = std::max(farMax, row.absK);
        }
        out.record.scaleIndex.push_back(j);
        out.record.maxValue.push_back(farMax);
        out.cEmpMin = std::min(out.cEmpMin, cEmp);
        out.cEmpMax = std::max(out.cEmpMax, cEmp);
        out.table.insert(out.table.end(), rows.begin(), rows.end());
    }
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < out.record.scaleIndex.size(); ++i)
        pts.emplace_back(out.record.scaleIndex[i], out.record.maxValue[i]);
    out.record.fit = decay_fit(pts);
    out.rho = -out.record.fit.slope - 1.0;
    out.record.criterion = "fitted rho4 > 0 and envelope-constant drift <= 2x";
    out.record.pass = out.rho > 0.0 && out.cEmpMax <= 2.0 * out.cEmpMin;
    return out;
}

// continuous analogue over dyadic heights ell at a fixed window scale
inline TTstarSweep sweep_ttstar_continuous(const ExperimentConfig& cfg,
                                           const std::vector<int>& ells = {4, 5, 6, 7, 8},
                                           int pairsPerScale = 60) {
    TTstarSweep out;
    out.record.name = "ttstar-continuous";
    out.record.paperRef =
        "continuous kernel far-zone decay |K_ell(x,y)| <= C 2^{-j} 2^{-ell rho}";
    const auto& p = cfg.params;
    const int j = 8;
    out.cEmpMin = std::numeric_limits<double>::infinity();
    for (const int ell : ells) {
        ChoiceFunctions ch;
        const double base = std::pow(1.1 * std::exp2(ell - j), p.c);
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(ell);
        ch.jOf = [j](double) { return j; };
        ch.lambdaOf = [base, seed, &p](double x) {
            const double u = detail::hash_uniform(
                static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(4.0 * x))),
                seed);
            return base * (1.0 + 0.5 * u);  // keeps lambda^{1/c} 2^j within [2^ell, 2^{ell+1})
        };
        ch.lambdaLo = 0.0;
        ch.lambdaHi = std::numeric_limits<double>::infinity();
        const double maxSep = 3.0 * std::ldexp(1.0, j - 3);
        const double farLo = std::ldexp(1.0, j - 2);
        std::mt19937_64 rng(seed);
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < pairsPerScale; ++i) {
            const double x =
                64.0 * (std::ldexp(static_cast<double>(rng() >> 11), -53) - 0.5);
            const double sep =
                maxSep * (2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0);
            pairs.emplace_back(x, x - sep);
        }
        std::vector<KernelSweepRow> rows(pairs.size());
        detail::parallel_for(pairs.size(), cfg.threads, [&](std::size_t i) {
            const auto [x, y] = pairs[i];
            const auto k =
                ttstar_kernel_continuous(x, y, ell, SignMode::even, SignHalf::minus, ch, p.c);
            KernelSweepRow row;
            row.j = j;
            row.r = ell;
            row.x = x;
            row.y = y;
            row.absK = std::abs(k);
            row.envelope = std::exp2(-static_cast<double>(j));
            row.ratio = row.absK / row.envelope;
            rows[i] = row;
        });
        double farMax = 0.0, cEmp = 0.0;
        for (const auto& row : rows) {
            cEmp = std::max(cEmp, row.ratio);
            if (std::abs(row.x - row.y) >= farLo) farMax = std::max(farMax, row.absK);
        }
        out.record.scaleIndex.push_back(ell);
        out.record.maxValue.push_back(farMax * std::exp2(static_cast<double>(j)));
        out.cEmpMin = std::min(out.cEmpMin, cEmp);
        out.cEmpMax = std::max(out.cEmpMax, cEmp);
        out.table.insert(out.table.end(), rows.begin(), rows.end());
    }
    std::vector<std::pair<int, double>> pts;
    for (std::size_t i = 0; i < out.record.scaleIndex.size(); ++i)
        pts.emplace_back(out.record.scaleIndex[i], out.record.maxValue[i]);
    out.record.fit = decay_fit(pts);
    out.rho = -out.record.fit.slope;
    out.record.criterion = "fitted rho > 0 over ell";
    out.record.pass = out.rho > 0.0;
    return out;
}

struct SobolevRecord {
    double lhs = 0.0;    // || sup_t |F(x,t)| ||_2
    double A = 0.0;      // sup_t ||F(.,t)||_2
    double a = 0.0;      // sup_t ||d/dt F(.,t)||_2
    double rhs = 0.0;    // A + sqrt(A a |I|)
    double ratio = 0.0;  // lhs / rhs
};

// samples[ti][xi] over a uniform t-grid on [tLo, tHi]; the derivative factor
// must be stable when the t-resolution is halved (<= 5% change)
inline SobolevRecord sobolev_check(
    const std::vector<std::vector<std::complex<double>>>& samples, double tLo, double tHi) {
    const std::size_t nt = samples.size();
    if (nt < 5) throw std::domain_error("sobolev_check: need at least 5 time samples");
    const std::size_t nx = samples.front().size();
    const double dt = (tHi - tLo) / static_cast<double>(nt - 1);
    auto l2 = [&](const std::vector<std::complex<double>>& row) {
        KahanSum<double> s;
        for (const auto& z : row) s.add(std::norm(z));
        return std::sqrt(s.value());
    };
    auto derivSup = [&](std::size_t stride) {
        double worst = 0.0;
        for (std::size_t t = stride; t + stride < nt; t += stride) {
            std::vector<std::complex<double>> d(nx);
            for (std::size_t x = 0; x < nx; ++x)
                d[x] = (samples[t + stride][x] - samples[t - stride][x]) /
                       (2.0 * dt * static_cast<double>(stride));
            worst = std::max(worst, l2(d));
        }
        return worst;
    };
    const double aFine = derivSup(1);
    const double aCoarse = derivSup(2);
    if (std::abs(aFine - aCoarse) > 0.05 * std::max(std::max(aFine, aCoarse), 1e-300))
        throw std::runtime_error("sobolev_check: derivative estimate unstable under halving");
    SobolevRecord rec;
    rec.a = aFine;
    for (const auto& row : samples) rec.A = std::max(rec.A, l2(row));
    std::vector<std::complex<double>> sup(nx);
    for (std::size_t x = 0; x < nx; ++x) {
        double m = 0.0;
        for (std::size_t t = 0; t < nt; ++t) m = std::max(m, std::abs(samples[t][x]));
        sup[x] = m;
    }
    rec.lhs = l2(sup);
    rec.rhs = rec.A + std::sqrt(rec.A * rec.a * (tHi - tLo));
    rec.ratio = rec.rhs > 0.0 ? rec.lhs / rec.rhs : 0.0;
    return rec;
}

struct Report {
    ExperimentConfig config;
    std::vector<SweepRecord> sweeps;
    std::map<std::string, std::string> versions;
    std::map<std::string, double> timings;  // seconds; all zero in deterministic mode
};

inline nlohmann::ordered_json report_json(const Report& rep) {
    nlohmann::ordered_json j;
    j["config"] = rep.config;
    j["sweeps"] = nlohmann::ordered_json::array();
    for (const auto& s : rep.sweeps) {
        nlohmann::ordered_json rec{
            {"name", s.name},
            {"paperRef", s.paperRef},
            {"scaleIndex", s.scaleIndex},
            {"maxValue", s.maxValue},
            {"fit",
             {{"slope", s.fit.slope},
              {"intercept", s.fit.intercept},
              {"r2", s.fit.rSquared},
              {"window", {s.fit.windowLo, s.fit.windowHi}}}},
            {"pass", s.pass},
            {"criterion", s.criterion}};
        j["sweeps"].push_back(rec);
    }
    j["versions"] = rep.versions;
    j["timings"] = rep.timings;
    return j;
}

inline void write_sweep_csv(const SweepRecord& s, std::ostream& os) {
    os << "scale,max_value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.scaleIndex.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", s.scaleIndex[i], s.maxValue[i]);
        os << buf;
    }
}

// single polyline on log2 axes, self-contained
inline void write_svg(const SweepRecord& s, std::ostream& os) {
    const double w = 480.0, h = 320.0, margin = 48.0;
    double yLo = std::log2(*std::min_element(s.maxValue.begin(), s.maxValue.end()));
    double yHi = std::log2(*std::max_element(s.maxValue.begin(), s.maxValue.end()));
    if (yHi - yLo < 1e-12) yHi = yLo + 1.0;
    const double xLo = s.scaleIndex.front(), xHi = s.scaleIndex.back();
    auto px = [&](double x) {
        return margin + (x - xLo) / std::max(xHi - xLo, 1.0) * (w - 2 * margin);
    };
    auto py = [&](double y) { return h - margin - (y - yLo) / (yHi - yLo) * (h - 2 * margin); };
    char buf[160];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\" "
          "viewBox=\"0 0 480 320\">\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.0f\" y=\"20\" font-size=\"13\">%s (log2 scale)</text>\n",
                  margin, s.name.c_str());
    os << buf;
    os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (std::size_t i = 0; i < s.scaleIndex.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.scaleIndex[i]),
                      py(std::log2(s.maxValue[i])));
        os << buf;
    }
    os << "\"/>\n</svg>\n";
}

}  // namespace carlab
