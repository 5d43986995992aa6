// carlab: command-line front end for the exponential-sum / multiplier /
// Carleson-operator laboratory. Every run echoes its resolved config; all
// randomness hangs off a single 64-bit seed.
#include <chrono>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "carlab/harness.hpp"
#include "carlab/operators.hpp"
#include "carlab/variation.hpp"

namespace {

using namespace carlab;

constexpr const char* kVersion = "1.0.0";

void echo_config(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j = cfg;
    std::cout << "config: " << j.dump() << "\n";
}

void print_complex(const char* label, std::complex<double> z) {
    std::printf("%s = %.17g %+.17gi  |.| = %.17g\n", label, z.real(), z.imag(),
                std::abs(z));
}

int run_expsum(const ExperimentConfig& cfg, std::int64_t n, double xi1, double xi2) {
    const auto v = exp_sum(n, xi1, xi2, cfg.params.c);
    print_complex("S_N", v);
    const auto m = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::pow(static_cast<double>(n),
                                              (2.0 - cfg.params.c) / 3.0)));
    if (xi1 != 0.0 || xi2 != 0.0) {
        const auto b = bound_full(n, m, xi1, xi2, cfg.params.c);
        std::printf("bound = %.17g  ratio = %.17g\n", b.value, std::abs(v) / b.value);
    }
    return 0;
}

int run_multiplier(const ExperimentConfig& cfg, int j, double xi, double lambda, int mode) {
    const auto md = mode == 0 ? SignMode::even : SignMode::odd;
    const auto& p = cfg.params;
    print_complex("m_j", m_j(j, xi, lambda, md, p.c));
    print_complex("H_j", H_j(j, xi, lambda, md, p.c));
    print_complex("E_j", E_j(j, xi, lambda, md, p.c));
    std::printf("in_major_box = %d\n", in_major_box(j, xi, lambda, p) ? 1 : 0);
    if (!cfg.outPath.empty()) {
        MultiplierGrid grid;
        const MajorBox box(j, p);
        const auto xis = detail::straddle_axis(box.xiHalfWidth, cfg.grid / 4, 4.0);
        const auto lams = detail::straddle_axis(box.lambdaHalfWidth, cfg.grid / 4, 4.0);
        for (const double a : xis)
            for (const double b : lams)
                grid.points.push_back({std::exp2(j), a, b, m_j(j, a, b, md, p.c),
                                       box.contains(a, b)});
        std::ofstream os(cfg.outPath);
        grid.write_csv(os);
        std::cout << "wrote " << cfg.outPath << "\n";
    }
    return 0;
}

int run_carleson(const ExperimentConfig& cfg, bool impulse, std::int64_t support,
                 const std::string& inPath, int mode) {
    const auto md = mode == 0 ? SignMode::even : SignMode::odd;
    Signal1D f;
    std::int64_t nMax = 0;
    if (impulse) {
        f = Signal1D::impulse(0);
        nMax = support;
    } else if (!inPath.empty()) {
        std::ifstream is(inPath, std::ios::binary);
        if (peek_binary_dim(is) != 1)
            throw std::runtime_error("carleson: input signal must be 1-dimensional");
        f = read_binary_1d(is);
    } else {
        throw std::domain_error("carleson: provide --impulse or --in");
    }
    LambdaGrid grid;
    grid.points = {-0.25, 0.0, 0.3};
    const auto path = impulse ? ConvPath::direct : ConvPath::fft;
    const auto res = carleson_maximal(f, md, cfg.params.c, grid, path, nMax);
    std::printf("l2 norm = %.10g\n", lp_norm(res.magnitudes, 2.0));
    if (!cfg.outPath.empty()) {
        std::ofstream os(cfg.outPath);
        write_csv(res.magnitudes, os);
        std::cout << "wrote " << cfg.outPath << "\n";
    }
    return 0;
}

int run_ergodic(const ExperimentConfig& cfg, std::int64_t t, const std::string& inPath) {
    Signal2D f;
    if (!inPath.empty()) {
        std::ifstream is(inPath, std::ios::binary);
        if (peek_binary_dim(is) != 2)
            throw std::runtime_error("ergodic: input signal must be 2-dimensional");
        f = read_binary_2d(is);
    } else {
        f = Signal2D::impulse(0, 0);
    }
    const auto a = ergodic_average(f, t, cfg.params.c);
    std::printf("support box = [%lld,%lld] x [%lld,%lld], l1 = %.10g\n",
                static_cast<long long>(a.lo1), static_cast<long long>(a.hi1()),
                static_cast<long long>(a.lo2), static_cast<long long>(a.hi2()),
                lp_norm(a, 1.0));
    if (!cfg.outPath.empty()) {
        if (cfg.format == "csv") {
            std::ofstream os(cfg.outPath);
            write_csv(a, os);
        } else {
            std::ofstream os(cfg.outPath, std::ios::binary);
            write_binary(a, os);
        }
        std::cout << "wrote " << cfg.outPath << "\n";
    }
    return 0;
}

int run_ttstar(const ExperimentConfig& cfg, int j, int r, std::int64_t x, std::int64_t y,
               const std::string& generator) {
    const auto& p = cfg.params;
    ChoiceFunctions ch;
    if (generator == "constant")
        ch = constant_choice(j, r, p.c);
    else if (generator == "iid")
        ch = iid_uniform_choice(j, r, p.c, cfg.seed);
    else if (generator == "resonant")
        ch = resonant_choice(j, r, p.c, p, cfg.seed);
    else
        throw std::domain_error("ttstar: generator must be constant, iid or resonant");
    const auto k = ttstar_kernel_discrete(x, y, j, r, SignHalf::minus, ch, p.c, p);
    print_complex("K", k);
    const auto env = ttstar_envelope_discrete(j, p, 0.0);
    std::printf("envelope = %.17g\n", env.at(static_cast<double>(x - y)));
    if (!cfg.outPath.empty()) {
        const auto sw = sweep_ttstar(cfg, {j}, 200);
        std::ofstream os(cfg.outPath);
        write_kernel_sweep_csv(sw.table, os);
        std::cout << "wrote " << cfg.outPath << "\n";
    }
    return 0;
}

int run_sweeps(const ExperimentConfig& cfg, const std::string& name) {
    Report rep;
    rep.config = cfg;
    rep.versions["carlab"] = kVersion;
    auto timed = [&](const std::string& key, auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        rep.sweeps.push_back(fn());
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        rep.timings[key] = cfg.deterministic ? 0.0 : dt.count();
    };
    const bool all = name == "all";
    if (all || name == "minor-box")
        timed("minor-box", [&] { return sweep_minor_box(cfg); });
    if (all || name == "error-term")
        timed("error-term", [&] { return sweep_error_term(cfg); });
    if (all || name == "kt-difference")
        timed("kt-difference", [&] { return sweep_kt_difference(cfg); });
    if (all || name == "ttstar")
        timed("ttstar", [&] { return sweep_ttstar(cfg).record; });
    if (all || name == "ttstar-continuous")
        timed("ttstar-continuous", [&] { return sweep_ttstar_continuous(cfg).record; });
    if (rep.sweeps.empty())
        throw std::domain_error("sweep: unknown name '" + name + "'");
    const auto j = report_json(rep);
    if (!cfg.outPath.empty()) {
        std::ofstream os(cfg.outPath);
        os << j.dump(2) << "\n";
        std::cout << "wrote " << cfg.outPath << "\n";
        if (cfg.format == "csv" || cfg.format == "svg") {
            for (const auto& s : rep.sweeps) {
                const std::string base = cfg.outPath + "." + s.name;
                std::ofstream extra(base + "." + cfg.format);
                if (cfg.format == "csv")
                    write_sweep_csv(s, extra);
                else
                    write_svg(s, extra);
                std::cout << "wrote " << base + "." + cfg.format << "\n";
            }
        }
    } else {
        std::cout << j.dump(2) << "\n";
    }
    bool ok = true;
    for (const auto& s : rep.sweeps) ok = ok && s.pass;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace carlab;
    ExperimentConfig cfg;

    // a config file supplies defaults; explicit flags override it
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream is(argv[i + 1]);
            if (!is) {
                std::cerr << "cannot open config file " << argv[i + 1] << "\n";
                return 2;
            }
            nlohmann::ordered_json j;
            is >> j;
            cfg = j.template get<ExperimentConfig>();
        }
    }

    CLI::App app{"numerical laboratory for modulated Carleson operators and "
                 "ergodic averages along (n, floor(n^c))",
                 "carlab"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand name
    std::string configPath;
    app.add_option("--config", configPath, "JSON config file (flags override it)");
    app.add_option("--c", cfg.params.c, "phase exponent, in (1,2)");
    app.add_option("--eps", cfg.params.eps, "frequency-box exponent, in (0,min{1/4,2-c})");
    app.add_option("--nu", cfg.params.nu, "small-frequency window exponent, in (0,eps/10)");
    app.add_option("--delta1", cfg.params.delta1, "shell-count exponent, in (0,(2-c)/4)");
    app.add_option("--delta2", cfg.params.delta2,
                   "near-zone exponent, in (0,min{nu/100,(2-c)/100})");
    app.add_option("--nuprime", cfg.params.nuPrime,
                   "resonant-interval exponent, in (delta2,min{nu/2,(2-c)/2})");
    app.add_option("--jmin", cfg.jMin, "smallest dyadic scale");
    app.add_option("--jmax", cfg.jMax, "largest dyadic scale");
    app.add_option("--kmin", cfg.kMin, "smallest orbit-scale exponent (t = 2^k)");
    app.add_option("--kmax", cfg.kMax, "largest orbit-scale exponent");
    app.add_option("--grid", cfg.grid, "samples per frequency axis");
    app.add_option("--seed", cfg.seed, "64-bit seed behind all randomness");
    app.add_option("--threads", cfg.threads, "worker count (1 = bit-stable serial)");
    app.add_option("--out", cfg.outPath, "output file path");
    app.add_option("--format", cfg.format, "output format: csv, json or svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_flag("--deterministic", cfg.deterministic,
                 "zero wall-clock timings for byte-identical reports");

    auto* expsum = app.add_subcommand("expsum", "evaluate an exponential sum and its bound");
    std::int64_t esN = 1024;
    double esXi1 = 0.1, esXi2 = 0.01;
    expsum->add_option("--n", esN, "number of terms");
    expsum->add_option("--xi1", esXi1, "linear frequency");
    expsum->add_option("--xi2", esXi2, "fractional-power frequency");

    auto* mult = app.add_subcommand("multiplier", "evaluate m_j, H_j, E_j at a point");
    int mJ = 8, mMode = 0;
    double mXi = 0.0, mLambda = 0.0;
    mult->add_option("--j", mJ, "dyadic scale");
    mult->add_option("--xi", mXi, "linear frequency");
    mult->add_option("--lambda", mLambda, "modulation frequency");
    mult->add_option("--mode", mMode, "phase parity: 0 even, 1 odd")
        ->check(CLI::Range(0, 1));

    auto* carl = app.add_subcommand("carleson", "maximal operator on a signal");
    bool cImpulse = false;
    std::int64_t cSupport = 1024;
    std::string cIn;
    int cMode = 0;
    carl->add_flag("--impulse", cImpulse, "use the unit impulse at 0");
    carl->add_option("--support", cSupport, "kernel truncation radius");
    carl->add_option("--in", cIn, "input signal (binary format)");
    carl->add_option("--mode", cMode, "phase parity: 0 even, 1 odd")->check(CLI::Range(0, 1));

    auto* ergodic = app.add_subcommand("ergodic", "average along the orbit (n, floor(n^c))");
    std::int64_t eT = 8;
    std::string eIn;
    ergodic->add_option("--t", eT, "number of orbit steps");
    ergodic->add_option("--in", eIn, "input signal (binary format)");

    auto* tt = app.add_subcommand("ttstar", "evaluate the TT* kernel at a pair");
    int tJ = 8, tR = 2;
    std::int64_t tX = 0, tY = -64;
    std::string tGen = "constant";
    tt->add_option("--j", tJ, "dyadic scale");
    tt->add_option("--r", tR, "modulation shell index");
    tt->add_option("--x", tX, "first point");
    tt->add_option("--y", tY, "second point");
    tt->add_option("--generator", tGen, "choice function: constant, iid or resonant");

    auto* sweep = app.add_subcommand("sweep", "run a decay sweep and emit a report");
    std::string sName = "all";
    sweep->add_option("--name", sName,
                      "minor-box, error-term, kt-difference, ttstar, "
                      "ttstar-continuous or all");

    auto* report = app.add_subcommand("report", "full sweep suite from a config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.params.validate();
        if (cfg.jMin < 4 || cfg.jMax < cfg.jMin)
            throw std::domain_error("scale window must satisfy 4 <= jmin <= jmax");
        echo_config(cfg);
        if (expsum->parsed()) return run_expsum(cfg, esN, esXi1, esXi2);
        if (mult->parsed()) return run_multiplier(cfg, mJ, mXi, mLambda, mMode);
        if (carl->parsed()) return run_carleson(cfg, cImpulse, cSupport, cIn, cMode);
        if (ergodic->parsed()) return run_ergodic(cfg, eT, eIn);
        if (tt->parsed()) return run_ttstar(cfg, tJ, tR, tX, tY, tGen);
        if (sweep->parsed()) return run_sweeps(cfg, sName);
        if (report->parsed()) return run_sweeps(cfg, "all");
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
