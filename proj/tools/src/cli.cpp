#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <Eigen/Core>

#include "CLI11.hpp"
#include <jcdm/model.hpp>

namespace fs = std::filesystem;

namespace jcdm::cli {

int default_threads() {
    if (const char* s = std::getenv("JCDM_THREADS")) {
        try {
            const int n = std::stoi(s);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw config_error("JCDM_THREADS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

enum class Kind { Double, Int, String, Doubles, Ints };

struct Flag {
    CLI::Option* opt;
    std::string key;
    Kind kind;
};

struct Sub {
    CLI::App* app;
    std::vector<Flag> flags;

    Sub& add(const std::string& name, const std::string& key, Kind k, const std::string& help) {
        auto* o = app->add_option(name, help);
        if (k == Kind::Doubles || k == Kind::Ints)
            o->expected(1, CLI::detail::expected_max_vector_size)->delimiter(',');
        flags.push_back({o, key, k});
        return *this;
    }

    void collect(json& opt) const {
        for (const auto& f : flags) {
            if (!f.opt->count()) continue;
            switch (f.kind) {
                case Kind::Double: opt[f.key] = f.opt->as<double>(); break;
                case Kind::Int: opt[f.key] = f.opt->as<int>(); break;
                case Kind::String: opt[f.key] = f.opt->as<std::string>(); break;
                case Kind::Doubles: opt[f.key] = f.opt->as<std::vector<double>>(); break;
                case Kind::Ints: opt[f.key] = f.opt->as<std::vector<int>>(); break;
            }
        }
    }
};

void error_line(const char* category, const std::string& msg) {
    std::cerr << json{{"error", category}, {"message", msg}}.dump() << '\n';
}

json versions() {
    return {{"jcdm", JCDM_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"cli11", CLI11_VERSION},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
#if defined(__clang__)
            {"compiler", "clang " __clang_version__}
#elif defined(__GNUC__)
            {"compiler", "gcc " __VERSION__}
#else
            {"compiler", "unknown"}
#endif
    };
}

int run_impl(std::vector<std::string> args) {
    CLI::App app{"Jaynes-Cummings dimer: spectra, WKB bands, classical dynamics, Husimi maps", "jcdm"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    int N = 1;
    double g = 1.0, J = 1.0, eps_imb = 0.0, g_ratio = 0.0, J_ratio = 0.0;
    int bins = 101, threads = 0;
    unsigned long long seed = 0;
    std::string out = "out", manifest;
    app.add_option("--N", N, "total polariton number")->check(CLI::PositiveNumber);
    auto* og = app.add_option("--g", g, "qubit-cavity coupling");
    auto* oJ = app.add_option("--J", J, "hopping");
    auto* ogr = app.add_option("--g-over-Jsqrt2N", g_ratio, "coupling as g/(J sqrt(2N)), J from --J");
    auto* oJr = app.add_option("--J-over-gprime", J_ratio, "coupling as J/g' with g' = 1");
    app.add_option("--eps-imb", eps_imb, "on-site imbalance (eps Z on the diagonal)");
    auto* ob = app.add_option("--bins", bins, "DOS histogram bins");
    auto* oout = app.add_option("--out", out, "output directory");
    app.add_option("--from-manifest", manifest, "re-run the configuration stored in a manifest");
    auto* oth = app.add_option("--threads", threads, "worker threads (default JCDM_THREADS or all cores)");
    app.add_option("--seed", seed, "seed for initial-condition jitter");
    ogr->excludes(og)->excludes(oJr);
    oJr->excludes(og)->excludes(oJ);

    std::vector<Sub> subs;
    auto sub = [&](const std::string& name, const std::string& help) -> Sub& {
        subs.push_back({app.add_subcommand(name, help), {}});
        return subs.back();
    };
    subs.reserve(16);
    sub("spectrum", "exact eigenvalues");
    sub("spectral-map", "|Psi(Z)|^2 for every eigenstate").add("--min-weight", "min_weight", Kind::Double, "drop smaller weights");
    sub("dos", "density of states histogram");
    sub("splittings", "parity-partner splittings")
        .add("--eps-lo", "eps_lo", Kind::Double, "window start (E/N)")
        .add("--eps-hi", "eps_hi", Kind::Double, "window end (E/N)")
        .add("--pair-fraction", "pair_fraction", Kind::Double, "max gap / mean spacing for a pair");
    sub("imbalance-map", "quantum <x> vs equivalent classical start x0");
    sub("wkb-levels", "semiclassical levels")
        .add("--band", "band", Kind::Int, "1..4")
        .add("--regime", "regime", Kind::String, "delocalized|localized|critical|middle");
    sub("wkb-defects", "quantization defects at the exact eigenvalues")
        .add("--critical-c", "critical_c", Kind::Double, "critical window width in units of (J/N) ln N")
        .add("--band1-tunnel-coeff", "band1_tunnel_coeff", Kind::Double, "band-1 tunnelling prefactor");
    sub("wkb-wavefunction", "WKB amplitude vs exact band component")
        .add("--band", "band", Kind::Int, "1 or 4")
        .add("--state", "state", Kind::Int, "exact eigenstate index")
        .add("--eps", "eps", Kind::Double, "energy E/N when no state is given")
        .add("--parity", "parity", Kind::Int, "+1 or -1");
    sub("phase-boundary", "classical localization boundary").add("--points", "points", Kind::Int, "x0 samples");
    sub("classical-scan", "long-time averaged imbalance over (theta_R0, g/(2J sqrt N))")
        .add("--theta-points", "theta_points", Kind::Int, "")
        .add("--theta-min", "theta_min", Kind::Double, "")
        .add("--theta-max", "theta_max", Kind::Double, "")
        .add("--coupling-points", "coupling_points", Kind::Int, "")
        .add("--coupling-min", "coupling_min", Kind::Double, "g/(2J sqrt N)")
        .add("--coupling-max", "coupling_max", Kind::Double, "g/(2J sqrt N)")
        .add("--t-avg", "t_avg", Kind::Double, "window in units of 1/J")
        .add("--t-transient", "t_transient", Kind::Double, "units of 1/J")
        .add("--tol", "tol", Kind::Double, "integrator tolerance");
    sub("poincare", "Poincare sections of the restricted dynamics")
        .add("--coupling", "coupling", Kind::Doubles, "g/(2J sqrt N) values")
        .add("--r0", "r0", Kind::Doubles, "initial R_L / sqrt N")
        .add("--thetaR", "thetaR", Kind::Doubles, "initial theta_R")
        .add("--crossings", "crossings", Kind::Int, "section points per orbit")
        .add("--section", "section", Kind::Double, "theta_L value of the section")
        .add("--jitter", "jitter", Kind::Double, "uniform jitter of theta_R (uses --seed)")
        .add("--t-max", "t_max", Kind::Double, "give up after this time");
    sub("husimi", "Husimi Q of lower-lower band eigenstates")
        .add("--state", "state", Kind::Ints, "eigenstate indices (default: four representatives)")
        .add("--s", "s", Kind::Double, "squeezing tuning (default: linear in energy)")
        .add("--grid", "grid", Kind::Int, "grid points per axis");
    Sub& fig = sub("figure", "named figure presets");
    std::string fig_name;
    fig.app->add_option("name", fig_name, "fig1a fig1b fig3 fig4 fig5a-d fig6 fig7 fig8 figG1 figG2")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        error_line("config", e.what());
        return kExitConfig;
    }

    json config;
    fs::path outdir = out;
    if (!manifest.empty()) {
        std::ifstream in(manifest);
        if (!in) throw config_error("cannot read manifest " + manifest);
        json m;
        try {
            m = json::parse(in);
        } catch (const json::exception& e) {
            throw config_error(std::string("bad manifest: ") + e.what());
        }
        if (!m.contains("config")) throw config_error("manifest has no config");
        config = m["config"];
        if (!oout->count()) outdir = config.value("out", std::string("out"));
        if (oth->count()) config["threads"] = threads;
    } else {
        CLI::App* chosen = nullptr;
        for (const auto& s : subs)
            if (s.app->parsed()) chosen = s.app;
        if (!chosen) {
            std::cout << app.help();
            return kExitConfig;
        }
        ModelParams p;
        if (ogr->count()) {
            p = ModelParams::from_g_over_Jsqrt2N(N, g_ratio, J);
        } else if (oJr->count()) {
            p = ModelParams::from_J_over_gprime(N, J_ratio);
        } else {
            p.N = N;
            p.g = g;
            p.J = J;
        }
        p.eps_imb = eps_imb;
        json opt = json::object();
        for (const auto& s : subs)
            if (s.app == chosen) s.collect(opt);
        if (ob->count()) opt["bins"] = bins;
        if (chosen == fig.app) opt["name"] = fig_name;
        config = {{"command", chosen->get_name()},
                  {"params", {{"N", p.N}, {"g", p.g}, {"J", p.J}, {"eps_imb", p.eps_imb}}},
                  {"options", opt},
                  {"seed", seed},
                  {"threads", oth->count() ? threads : default_threads()},
                  {"out", out}};
    }
    if (config.value("threads", 1) < 1) throw config_error("--threads must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> outputs;
    json results = execute(config, outdir, outputs);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json m = {{"tool", "jcdm"}, {"versions", versions()}, {"config", config},
              {"outputs", outputs}, {"results", results}, {"wall_time_s", wall}};
    std::ofstream mf(outdir / "manifest.json");
    mf << m.dump(2) << '\n';
    if (!mf) throw std::runtime_error("cannot write manifest");
    std::cout << results.dump() << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_impl(args);
    } catch (const numerical_error& e) {
        error_line("numerical", e.what());
        return kExitNumerical;
    } catch (const std::logic_error& e) {  // config_error, domain_error, json type errors
        error_line("config", e.what());
        return kExitConfig;
    } catch (const json::exception& e) {
        error_line("config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        error_line("numerical", e.what());
        return kExitNumerical;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace jcdm::cli
