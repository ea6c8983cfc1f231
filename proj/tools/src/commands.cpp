#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>

#include <jcdm/classical.hpp>
#include <jcdm/husimi.hpp>
#include <jcdm/model.hpp>
#include <jcdm/spectra.hpp>
#include <jcdm/wkb.hpp>

#include "cli.hpp"
#include "csv.hpp"

namespace fs = std::filesystem;

namespace jcdm::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Ctx {
    ModelParams p;
    json opt;
    int threads = 1;
    unsigned long long seed = 0;
    fs::path out;
    std::vector<std::string>* outputs;

    fs::path file(const std::string& name) const {
        outputs->push_back(name);
        return out / name;
    }
    template <class T>
    T get(const char* key, T def) const {
        return opt.contains(key) && !opt[key].is_null() ? opt[key].get<T>() : def;
    }
};

ModelParams params_from(const json& j) {
    ModelParams p;
    p.N = j.at("N").get<int>();
    p.g = j.at("g").get<double>();
    p.J = j.at("J").get<double>();
    p.eps_imb = j.value("eps_imb", 0.0);
    return p;
}

json params_json(const ModelParams& p) { return {{"N", p.N}, {"g", p.g}, {"J", p.J}, {"eps_imb", p.eps_imb}}; }

wkb::Regime parse_regime(const std::string& s) {
    if (s == "delocalized") return wkb::Regime::Delocalized;
    if (s == "localized") return wkb::Regime::Localized;
    if (s == "critical") return wkb::Regime::Critical;
    if (s == "middle") return wkb::Regime::Middle;
    throw config_error("unknown regime '" + s + "'");
}

// ---- quantum spectra -------------------------------------------------------

json cmd_spectrum(const Ctx& c) {
    const auto sol = diagonalize(c.p);
    CsvWriter w(c.file("spectrum.csv"), {"index", "parity", "E", "eps"});
    for (int n = 0; n < sol.size(); ++n) (w << n << sol.parity[n] << sol.eps[n] * c.p.N << sol.eps[n]).row();
    return {{"states", sol.size()}};
}

json cmd_spectral_map(const Ctx& c, const std::string& name = "spectral_map.csv") {
    const auto sol = diagonalize(c.p);
    const double wmin = c.get("min_weight", 0.0);
    CsvWriter w(c.file(name), {"state", "x", "E", "eps", "weight"});
    long rows = 0;
    for (const auto& r : spectral_map(sol))
        if (r.weight >= wmin) {
            (w << r.state << r.x << r.eps * c.p.N << r.eps << r.weight).row();
            ++rows;
        }
    return {{"states", sol.size()}, {"rows", rows}};
}

json cmd_dos(const Ctx& c, const std::string& name = "dos.csv") {
    const auto sol = diagonalize(c.p);
    const auto h = dos(sol, c.get("bins", 101));
    CsvWriter w(c.file(name), {"bin_lo_eps", "bin_hi_eps", "bin_center_E", "bin_center_eps", "count"});
    for (int k = 0; k + 1 < int(h.edges.size()); ++k)
        (w << h.edges[k] << h.edges[k + 1] << h.center(k) * c.p.N << h.center(k) << h.counts[k]).row();
    return {{"bins", int(h.counts.size())}, {"mean_count", h.mean_count()}};
}

json cmd_splittings(const Ctx& c) {
    const auto sol = diagonalize(c.p);
    const double gp = c.p.gprime();
    const double lo = c.get("eps_lo", wkb::critical_energy(c.p, 4));
    const double hi = c.get("eps_hi", -std::sqrt(2.0) * gp);
    if (!(lo < hi)) throw config_error("splittings: empty energy window");
    const auto s = splittings(sol, lo, hi, c.get("pair_fraction", 0.1));
    CsvWriter w(c.file("splittings.csv"),
                {"lower", "E", "eps", "delta_E", "delta_eps", "wkb_delta_eps", "dQ"});
    for (const auto& pr : s.pairs) {
        double pred = std::nan(""), dq = std::nan("");
        try {
            pred = wkb::predicted_splitting(c.p, pr.mean_eps);
            dq = wkb::action_Q(c.p, wkb::band_of(c.p, pr.mean_eps), pr.mean_eps);
        } catch (const std::exception&) {
            // outside the localized regime of the WKB picture
        }
        (w << pr.lower << pr.mean_eps * c.p.N << pr.mean_eps << pr.delta * c.p.N << pr.delta << pred << dq).row();
    }
    return {{"pairs", s.pairs.size()}, {"unpaired", s.unpaired}, {"mean_spacing", s.mean_spacing}};
}

json cmd_imbalance_map(const Ctx& c, CsvWriter* shared = nullptr) {
    ModelParams p = c.p;
    if (p.eps_imb == 0.0) p.eps_imb = 1e-8 * p.J;
    const auto map = imbalance_map(diagonalize(p));
    const double r = p.J / p.gprime();
    auto emit = [&](CsvWriter& w) {
        for (const auto& pt : map.points)
            (w << r << pt.state << pt.eps * p.N << pt.eps << pt.x0 << pt.mean_x << int(pt.localized_side)).row();
    };
    if (shared) {
        emit(*shared);
    } else {
        CsvWriter w(c.file("imbalance_map.csv"),
                    {"J_over_gprime", "state", "E", "eps", "x0", "mean_x", "localized_side"});
        emit(w);
    }
    int loc = 0, hit = 0;
    for (const auto& pt : map.points)
        if (pt.localized_side) {
            ++loc;
            if (std::abs(pt.mean_x) > 0.5) ++hit;
        }
    return {{"eps_imb", p.eps_imb}, {"x_m", map.x_m}, {"points", map.points.size()},
            {"skipped", map.skipped.size()}, {"localized_side", loc}, {"localized_and_polarized", hit}};
}

// ---- WKB -------------------------------------------------------------------

json cmd_wkb_levels(const Ctx& c) {
    const double gp = c.p.gprime();
    std::vector<std::pair<int, wkb::Regime>> todo;
    const bool explicit_band = c.opt.contains("band");
    if (explicit_band) {
        const int band = c.opt["band"].get<int>();
        const std::string reg = c.get<std::string>("regime", band == 2 || band == 3 ? "middle" : "delocalized");
        todo.push_back({band, parse_regime(reg)});
    } else {
        for (int b : {4, 1})
            for (auto r : {wkb::Regime::Delocalized, wkb::Regime::Critical, wkb::Regime::Localized})
                todo.push_back({b, r});
        if (c.p.J / gp <= 2 - std::sqrt(2.0)) {
            todo.push_back({2, wkb::Regime::Middle});
            todo.push_back({3, wkb::Regime::Middle});
        }
    }
    CsvWriter w(c.file("wkb_levels.csv"), {"band", "regime", "n", "branch", "E", "eps"});
    long count = 0;
    for (auto [b, r] : todo) {
        std::vector<wkb::Level> lv;
        try {
            lv = wkb::solve_levels(c.p, b, r);
        } catch (const std::domain_error& e) {
            if (explicit_band) throw config_error(std::string("wkb-levels: ") + e.what());
            continue;  // regime absent at these couplings
        }
        for (const auto& l : lv) (w << b << wkb::to_string(r) << l.n << l.branch << l.eps * c.p.N << l.eps).row();
        count += long(lv.size());
    }
    return {{"levels", count}};
}

json cmd_wkb_defects(const Ctx& c, const std::string& name = "defects.csv") {
    wkb::Options o;
    o.critical_c = c.get("critical_c", o.critical_c);
    o.band1_tunnel_coeff = c.get("band1_tunnel_coeff", o.band1_tunnel_coeff);
    const auto sol = diagonalize(c.p);
    CsvWriter w(c.file(name), {"state", "E", "eps", "band", "regime", "standard", "critical", "matched"});
    std::vector<double> outside;
    double s_std = 0, s_crit = 0;
    int n_crit = 0;
    for (int n = 0; n < sol.size(); ++n) {
        const auto d = wkb::defect(c.p, sol.eps[n], o);
        (w << n << sol.eps[n] * c.p.N << sol.eps[n] << d.band << wkb::to_string(d.regime) << d.standard
           << d.critical << d.matched)
            .row();
        if (d.regime == wkb::Regime::Critical) {
            s_std += std::abs(d.standard);
            s_crit += std::abs(d.critical);
            ++n_crit;
        } else if (std::isfinite(d.matched)) {
            outside.push_back(std::abs(d.matched));
        }
    }
    json res = {{"states", sol.size()}, {"critical_states", n_crit}};
    if (!outside.empty()) {
        std::nth_element(outside.begin(), outside.begin() + outside.size() / 2, outside.end());
        res["median_defect_outside_windows"] = outside[outside.size() / 2];
    }
    if (n_crit) res["critical_improvement"] = s_std / std::max(s_crit, 1e-300);
    return res;
}

json cmd_wkb_wavefunction(const Ctx& c) {
    const int band = c.get("band", 4);
    const int N = c.p.N;
    const int state = c.get("state", -1);
    double eps = c.get("eps", std::nan(""));
    Eigen::MatrixXd C;
    int parity = c.get("parity", +1);
    if (state >= 0) {
        const auto sol = diagonalize(c.p);
        if (state >= sol.size()) throw config_error("wkb-wavefunction: state out of range");
        eps = sol.eps[state];
        C = sol.band_components(state);
        if (sol.parity[state] != 0) parity = sol.parity[state];
    }
    if (!std::isfinite(eps)) throw config_error("wkb-wavefunction: give --state or --eps");
    std::vector<double> xs(N + 1);
    for (int k = 0; k <= N; ++k) xs[k] = double(2 * k - N) / N;
    const auto psi = wkb::wkb_wavefunction(c.p, band, eps, xs, parity);
    // align the overall sign with the exact amplitude
    double sgn = 1.0;
    if (C.size()) {
        double dot = 0;
        for (int k = 0; k <= N; ++k) dot += psi[k] * C(k, band - 1);
        sgn = dot < 0 ? -1.0 : 1.0;
    }
    CsvWriter w(c.file("wavefunction.csv"), {"Z", "x", "psi_wkb", "psi_exact"});
    for (int k = 0; k <= N; ++k)
        (w << 2 * k - N << xs[k] << sgn * psi[k] << (C.size() ? C(k, band - 1) : std::nan(""))).row();
    return {{"eps", eps}, {"E", eps * N}, {"band", band}, {"parity", parity}};
}

json cmd_phase_boundary(const Ctx& c) {
    const int n = c.get("points", 101);
    if (n < 2) throw config_error("phase-boundary: need at least 2 points");
    CsvWriter w(c.file("phase_boundary.csv"), {"x0", "g_over_Jsqrt2N", "g_over_J", "J_over_gprime"});
    for (int i = 1; i <= n; ++i) {
        const double x0 = double(i) / n;
        const double r = wkb::phase_boundary(x0);
        // at fixed g/(J sqrt 2N) the band ratio is J/g' = 1/r
        (w << x0 << r << wkb::phase_boundary_g_over_J(x0, c.p.N) << 1.0 / r).row();
    }
    return {{"g_over_J_at_x0_1", wkb::phase_boundary_g_over_J(1.0, c.p.N)}};
}

// ---- classical ---------------------------------------------------------------

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

json cmd_classical_scan(const Ctx& c, const std::string& prefix = "") {
    const int nt = c.get("theta_points", 20), ncp = c.get("coupling_points", 30);
    if (nt < 1 || ncp < 2) throw config_error("classical-scan: grid too small");
    const auto thetas = grid(c.get("theta_min", 0.05 * kPi), c.get("theta_max", 0.95 * kPi), nt);
    const auto cpl = grid(c.get("coupling_min", 0.5), c.get("coupling_max", 3.0), ncp);
    classical::ScanOptions o;
    o.t_avg_J = c.get("t_avg", o.t_avg_J);
    o.t_transient_J = c.get("t_transient", o.t_transient_J);
    o.tol = c.get("tol", o.tol);
    o.threads = c.threads;
    const auto res = classical::threshold_scan(thetas, cpl, c.p.N, c.p.J, o);
    {
        CsvWriter w(c.file(prefix + "scan.csv"),
                    {"theta_R0", "coupling", "g_over_JsqrtN", "avg_imbalance", "converged"});
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < ncp; ++j)
                (w << thetas[i] << cpl[j] << 2 * cpl[j] << res.average[i][j] << int(res.converged[i][j])).row();
    }
    int unconverged = 0;
    for (const auto& row : res.converged) unconverged += int(std::count(row.begin(), row.end(), false));
    CsvWriter w(c.file(prefix + "threshold.csv"),
                {"theta_R0", "threshold", "threshold_g_over_JsqrtN", "pendulum", "pendulum_g_over_JsqrtN"});
    for (int i = 0; i < nt; ++i) {
        double pc = std::nan("");
        try {
            pc = classical::pendulum_critical(thetas[i]);
        } catch (const std::exception&) {
        }
        (w << thetas[i] << res.threshold[i] << 2 * res.threshold[i] << pc << 2 * pc).row();
    }
    return {{"grid", {nt, ncp}}, {"unconverged", unconverged}};
}

json cmd_poincare(const Ctx& c) {
    const auto couplings = c.get<std::vector<double>>("coupling", {0.088, 0.311, 0.442, 1.41});
    const auto r0s = c.get<std::vector<double>>("r0", {0.05, 0.2, 0.4, 0.7, 1.0});
    const auto ths = c.get<std::vector<double>>("thetaR", {0.3, 1.5, 2.8});
    const int ncross = c.get("crossings", 1000);
    const double section = c.get("section", 0.0);
    const double jitter = c.get("jitter", 0.0);
    const double tmax = c.get("t_max", 3e6);
    const int N = c.p.N;
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CsvWriter pw(c.file("poincare.csv"), {"coupling", "orbit", "crossing_index", "R_L", "I_R", "r", "alpha"});
    CsvWriter fw(c.file("section_fill.csv"), {"coupling", "orbit", "fill", "complete"});
    json fills = json::array();
    for (double eta : couplings) {
        const classical::Couplings cp{eta * 2.0 * c.p.J * std::sqrt(double(N)), c.p.J};
        double sum = 0;
        int orbit = 0;
        for (double r0 : r0s)
            for (double th : ths) {
                const double thj = th + jitter * U(rng);
                const auto res =
                    classical::poincare_section({0.0, thj, r0 * std::sqrt(double(N)), 0.0}, cp, N, ncross, section, tmax);
                for (const auto& pt : res.points)
                    (pw << eta << orbit << pt.crossing << pt.R_L << pt.I_R << pt.r << pt.alpha).row();
                const double f = classical::section_fill(res);
                (fw << eta << orbit << f << int(res.complete)).row();
                sum += f;
                ++orbit;
            }
        fills.push_back({{"coupling", eta}, {"mean_fill", sum / std::max(orbit, 1)}});
    }
    return {{"fill", fills}};
}

// ---- Husimi ------------------------------------------------------------------

json cmd_husimi(const Ctx& c, const std::string& prefix = "") {
    if (c.p.eps_imb != 0.0) throw config_error("husimi: needs eps_imb = 0 (parity eigenstates)");
    const auto sol = diagonalize(c.p);
    const int ng = c.get("grid", 201);
    std::vector<int> states = c.get<std::vector<int>>("state", {});
    std::vector<std::string> labels;
    if (states.empty()) {
        // ground, oscillatory, separatrix, localized representatives of band 4
        const double e0 = sol.eps[0], ec = wkb::critical_energy(c.p, 4), top = -std::sqrt(2.0) * c.p.gprime();
        const std::pair<const char*, double> targets[] = {
            {"ground", e0}, {"oscillatory", 0.5 * (e0 + ec)}, {"separatrix", ec}, {"localized", 0.5 * (ec + top)}};
        for (auto [lab, e] : targets) {
            const int n = husimi::nearest_band4_state(sol, e);
            if (n < 0) continue;
            if (std::string(lab) == "localized" && !(sol.eps[n] > ec)) continue;  // no level above eps_c
            states.push_back(n);
            labels.push_back(lab);
        }
    } else {
        labels.assign(states.size(), "");
    }
    const double s_fixed = c.get("s", 0.0);
    CsvWriter hw(c.file(prefix + "husimi.csv"), {"state", "x", "theta", "Q"});
    CsvWriter sw(c.file(prefix + "husimi_states.csv"),
                 {"state", "label", "E", "eps", "s", "kappa", "band4_weight", "components", "ring_like"});
    json summary = json::array();
    std::vector<double> levels;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const int n = states[k];
        const double s = s_fixed > 0 ? s_fixed : husimi::tuning(c.p, sol.eps[n], sol.eps[0]);
        const auto g = husimi::husimi_q(sol, n, s, ng, ng);
        for (int i = 0; i < int(g.x.size()); ++i)
            for (int j = 0; j < int(g.theta.size()); ++j) (hw << n << g.x[i] << g.theta[j] << g.Q(i, j)).row();
        const int comp = husimi::count_components(g);
        const bool ring = husimi::ring_like(g);
        (sw << n << labels[k] << sol.eps[n] * c.p.N << sol.eps[n] << s << g.kappa << g.band4_weight << comp
            << int(ring))
            .row();
        summary.push_back({{"state", n}, {"label", labels[k]}, {"components", comp}, {"ring_like", ring}});
        levels.push_back(sol.eps[n]);
    }
    levels.push_back(wkb::critical_energy(c.p, 4));
    std::sort(levels.begin(), levels.end());
    CsvWriter cw(c.file(prefix + "contours.csv"), {"level", "line", "point", "x", "theta"});
    for (const auto& ct : husimi::classical_contours(c.p, levels, ng, ng))
        for (int l = 0; l < int(ct.lines.size()); ++l)
            for (int q = 0; q < int(ct.lines[l].size()); ++q)
                (cw << ct.level << l << q << ct.lines[l][q][0] << ct.lines[l][q][1]).row();
    return {{"states", summary}, {"kappa0", husimi::kappa0(c.p)}};
}

// ---- figure presets ----------------------------------------------------------

json cmd_potentials(const Ctx& c, const std::vector<double>& ratios, const std::string& name) {
    CsvWriter w(c.file(name), {"J_over_gprime", "band", "x", "V_low", "V_high"});
    const int n = c.get("points", 401);
    for (double r : ratios) {
        const auto p = ModelParams::from_J_over_gprime(c.p.N, r);
        for (int b = 1; b <= 4; ++b)
            for (int i = 0; i < n; ++i) {
                const double x = -1.0 + 2.0 * i / (n - 1);
                (w << r << b << x << wkb::potential(p, b, wkb::Edge::Low, x)
                   << wkb::potential(p, b, wkb::Edge::High, x))
                    .row();
            }
    }
    return {{"ratios", ratios}};
}

json cmd_figure(Ctx c) {
    const std::string name = c.get<std::string>("name", "");
    auto with = [&](ModelParams p) {
        Ctx d = c;
        d.p = p;
        return d;
    };
    if (name == "fig1a" || name == "fig1b") {
        const double ratio = name == "fig1a" ? 1.0 : 2.0;
        const auto d = with(ModelParams::from_g_over_Jsqrt2N(400, ratio));
        json r = cmd_spectral_map(d);
        r["g_over_Jsqrt2N"] = ratio;
        return r;
    }
    if (name == "fig3") return cmd_potentials(with(ModelParams::from_J_over_gprime(400, 1.0)), {1.0, 0.5}, "potentials.csv");
    if (name == "fig4") return cmd_wkb_defects(with(ModelParams::from_J_over_gprime(400, 0.25)));
    if (name.size() == 5 && name.rfind("fig5", 0) == 0 && name[4] >= 'a' && name[4] <= 'd') {
        const double ratios[] = {100.0, 1.0, 0.5, 0.25};
        Ctx d = with(ModelParams::from_J_over_gprime(400, ratios[name[4] - 'a']));
        if (!d.opt.contains("bins")) d.opt["bins"] = 101;
        json r = cmd_dos(d);
        r["J_over_gprime"] = ratios[name[4] - 'a'];
        return r;
    }
    if (name == "fig6") {
        const auto ratios = c.get<std::vector<double>>(
            "ratios", {0.3, 0.35, 0.4, 0.45, 0.5, 0.525, 0.55, 0.575, 0.6, 0.625, 0.65, 0.675, 0.7});
        json maps = json::array();
        {
            CsvWriter w(c.file("imbalance_map.csv"),
                        {"J_over_gprime", "state", "E", "eps", "x0", "mean_x", "localized_side"});
            for (double r : ratios) {
                auto j = cmd_imbalance_map(with(ModelParams::from_J_over_gprime(400, r)), &w);
                j["J_over_gprime"] = r;
                maps.push_back(j);
            }
        }
        // classical average imbalance of V_1^l orbits
        CsvWriter w(c.file("classical_map.csv"), {"J_over_gprime", "x0", "mean_x", "period"});
        for (double r : ratios) {
            const auto p = ModelParams::from_J_over_gprime(400, r);
            for (int i = 1; i < 100; ++i) {
                const double x0 = i / 100.0;
                try {
                    const auto o = wkb::classical_orbit(p, 1, x0);
                    (w << r << x0 << o.mean_x << o.period).row();
                } catch (const std::exception&) {
                    // degenerate orbit at a potential extremum
                }
            }
        }
        CsvWriter b(c.file("phase_boundary.csv"), {"x0", "J_over_gprime"});
        for (int i = 1; i <= 100; ++i) (b << i / 100.0 << 1.0 / wkb::phase_boundary(i / 100.0)).row();
        return {{"maps", maps}};
    }
    if (name == "fig7") {
        Ctx d = with(ModelParams{100, 1.0, 1.0, 0.0});
        for (auto [k, v] : std::map<std::string, json>{{"theta_points", 20},
                                                       {"coupling_points", 30},
                                                       {"theta_min", 0.05 * kPi},
                                                       {"theta_max", 0.95 * kPi},
                                                       {"coupling_min", 0.5},
                                                       {"coupling_max", 3.5}})
            if (!d.opt.contains(k)) d.opt[k] = v;
        return cmd_classical_scan(d);
    }
    if (name == "fig8") {
        Ctx d = with(ModelParams{1, 1.0, 1.0, 0.0});
        return cmd_poincare(d);
    }
    if (name == "figG1") {
        json r = cmd_husimi(with(ModelParams::from_J_over_gprime(100, 1.0 / 3.0)));
        return r;
    }
    if (name == "figG2") {
        json r = json::object();
        for (int N : {20, 10, 6})
            r["N" + std::to_string(N)] =
                cmd_husimi(with(ModelParams::from_J_over_gprime(N, 1.0 / 3.0)), "N" + std::to_string(N) + "_");
        return r;
    }
    throw config_error("unknown figure preset '" + name + "'");
}

}  // namespace

json execute(const json& config, const fs::path& out, std::vector<std::string>& outputs) {
    Ctx c;
    c.p = params_from(config.at("params"));
    c.opt = config.value("options", json::object());
    c.threads = config.value("threads", 1);
    c.seed = config.value("seed", 0ull);
    c.out = out;
    c.outputs = &outputs;
    const std::string cmd = config.at("command").get<std::string>();
    if (cmd != "figure") c.p.validate();
    fs::create_directories(out);

    static const std::map<std::string, std::function<json(const Ctx&)>> table = {
        {"spectrum", [](const Ctx& c) { return cmd_spectrum(c); }},
        {"spectral-map", [](const Ctx& c) { return cmd_spectral_map(c); }},
        {"dos", [](const Ctx& c) { return cmd_dos(c); }},
        {"splittings", [](const Ctx& c) { return cmd_splittings(c); }},
        {"imbalance-map", [](const Ctx& c) { return cmd_imbalance_map(c); }},
        {"wkb-levels", [](const Ctx& c) { return cmd_wkb_levels(c); }},
        {"wkb-defects", [](const Ctx& c) { return cmd_wkb_defects(c); }},
        {"wkb-wavefunction", [](const Ctx& c) { return cmd_wkb_wavefunction(c); }},
        {"phase-boundary", [](const Ctx& c) { return cmd_phase_boundary(c); }},
        {"classical-scan", [](const Ctx& c) { return cmd_classical_scan(c); }},
        {"poincare", [](const Ctx& c) { return cmd_poincare(c); }},
        {"husimi", [](const Ctx& c) { return cmd_husimi(c); }},
        {"figure", [](const Ctx& c) { return cmd_figure(c); }},
    };
    const auto it = table.find(cmd);
    if (it == table.end()) throw config_error("unknown command '" + cmd + "'");
    json res = it->second(c);
    if (cmd != "figure") res["params"] = params_json(c.p);
    return res;
}

}  // namespace jcdm::cli
