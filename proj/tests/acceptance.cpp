// One line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <jcdm/classical.hpp>
#include <jcdm/husimi.hpp>
#include <jcdm/model.hpp>
#include <jcdm/special.hpp>
#include <jcdm/spectra.hpp>
#include <jcdm/wkb.hpp>

#include "oracles.hpp"

using namespace jcdm;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Clock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

int failures = 0;

void report(int k, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", k, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

// least-squares slope of y against x
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

// ---------------------------------------------------------------------------

void oracle_equivalence() {
    Clock c;
    double worst = 0;
    int cases = 0;
    for (int N : {1, 2, 3, 4})
        for (double g : {0.25, 1.0, 3.0})
            for (double J : {0.2, 1.0, 2.5}) {
                const ModelParams p{N, g, J, 0.0};
                const auto sol = diagonalize(p);
                const auto o = oracle::kron_spectrum(p);
                if (int(o.size()) != sol.size()) {
                    worst = INFINITY;
                    continue;
                }
                for (int k = 0; k < sol.size(); ++k) worst = std::max(worst, std::abs(sol.eps[k] - o[k]));
                ++cases;
            }
    const auto one = diagonalize(ModelParams{1, 1.0, 1.0, 0.0});
    const double phi = 0.5 * (1 + std::sqrt(5.0));
    const double closed[] = {-phi, -1 / phi, 1 / phi, phi};
    double w1 = 0;
    for (int k = 0; k < 4; ++k) w1 = std::max(w1, std::abs(one.eps[k] - closed[k]));
    const double t = c.seconds();
    report(1, worst < 1e-10 && w1 < 1e-12 && t < 1.0,
           fmt("%d spectra, max |banded - tensor| = %.2e (tol 1e-10); N=1 closed form %.2e (tol 1e-12); %.3f s (< 1 s)",
               cases, worst, w1, t));
}

void quantization_defects() {
    Clock c;
    const auto p = ModelParams::from_J_over_gprime(400, 0.25);
    const auto sol = diagonalize(p);
    std::vector<double> outside;
    double sum_std = 0, sum_crit = 0;
    int ncrit = 0, failed = 0;
    for (int n = 0; n < sol.size(); ++n) {
        wkb::DefectRecord d;
        try {
            d = wkb::defect(p, sol.eps[n]);
        } catch (const std::exception&) {
            ++failed;
            continue;
        }
        if (d.regime == wkb::Regime::Critical) {
            sum_std += d.standard;
            sum_crit += d.critical;
            ++ncrit;
        } else {
            outside.push_back(d.matched);
        }
    }
    const double med = median(outside);
    const double gain = sum_crit > 0 ? sum_std / sum_crit : INFINITY;
    const double t = c.seconds();
    report(2, med < 0.05 && ncrit > 0 && gain >= 5.0 && t < 120.0,
           fmt("N=400 J/g'=1/4: median defect %.2e rad over %zu states (< 0.05); critical windows %d states, "
               "standard/modified mean defect = %.1f (>= 5); %d unevaluated; %.1f s (< 120 s)",
               med, outside.size(), ncrit, gain, failed, t));
}

void splitting_law() {
    Clock c;
    const std::vector<int> Ns{100, 200, 400};
    double worst = 0;
    int used = 0;
    // per N: (eps, ln delta_exact - ln prefactor) with prefactor = delta_WKB e^{N dQ}
    std::vector<std::vector<std::array<double, 2>>> curves;
    for (int N : Ns) {
        const auto p = ModelParams::from_J_over_gprime(N, 0.25);
        const auto sol = diagonalize(p);
        const auto s = splittings(sol, wkb::critical_energy(p, 4), -std::sqrt(2.0) * p.gprime());
        std::vector<std::array<double, 2>> curve;
        for (const auto& pr : s.pairs) {
            if (pr.delta < 1e-12) continue;  // below the resolution of the eigensolver
            const double w = wkb::predicted_splitting(p, pr.mean_eps);
            const double dq = wkb::action_Q(p, 4, pr.mean_eps);
            worst = std::max(worst, std::abs(std::log(pr.delta) / std::log(w) - 1.0));
            ++used;
            curve.push_back({pr.mean_eps, std::log(pr.delta) - (std::log(w) + N * dq)});
        }
        curves.push_back(curve);
    }
    // N-slope at fixed energies inside the range every N resolves
    const auto pq = ModelParams::from_J_over_gprime(100, 0.25);
    double worst_slope = 0;
    int nslope = 0;
    for (double es : {-1.746, -1.745, -1.744, -1.743}) {
        std::vector<double> xs, ys;
        for (std::size_t k = 0; k < Ns.size(); ++k) {
            const auto& cv = curves[k];
            for (std::size_t i = 0; i + 1 < cv.size(); ++i)
                if ((cv[i][0] - es) * (cv[i + 1][0] - es) <= 0) {
                    const double f = (es - cv[i][0]) / (cv[i + 1][0] - cv[i][0]);
                    xs.push_back(Ns[k]);
                    ys.push_back(cv[i][1] + f * (cv[i + 1][1] - cv[i][1]));
                    break;
                }
        }
        if (xs.size() != Ns.size()) continue;
        const double dq = wkb::action_Q(pq, 4, es);
        const double sl = slope(xs, ys);
        worst_slope = std::max(worst_slope, std::abs(sl / -dq - 1.0));
        ++nslope;
    }
    const double t = c.seconds();
    report(3, used >= 10 && worst <= 0.15 && nslope >= 3 && worst_slope <= 0.10,
           fmt("J/g'=1/4, N=100/200/400: %d resolved pairs, max |ln d_exact / ln d_WKB - 1| = %.3f (<= 0.15); "
               "N-slope vs -dQ at %d energies, max rel. error %.4f (<= 0.10); %.1f s",
               used, worst, nslope, worst_slope, t));
}

void phase_boundary_check() {
    Clock c;
    bool exact = true;
    for (int N : {1, 4, 100, 400, 10000}) exact &= wkb::phase_boundary_g_over_J(1.0, N) == 2.0 * std::sqrt(double(N));
    int loc = 0, tot = 0;
    std::string per;
    for (double r : {0.2, 0.3, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65}) {
        auto p = ModelParams::from_J_over_gprime(400, r);
        p.eps_imb = 1e-8 * p.J;
        const auto map = imbalance_map(diagonalize(p));
        int l = 0, n = 0;
        for (const auto& pt : map.points)
            if (pt.localized_side) {
                ++n;
                l += std::abs(pt.mean_x) > 0.5;
            }
        loc += l;
        tot += n;
        per += fmt(" %.2f:%d/%d", r, l, n);
    }
    const double frac = tot ? double(loc) / tot : 0.0;
    report(4, exact && frac >= 0.9,
           fmt("g_c/J(x0=1) == 2 sqrt N exactly: %s; N=400 localized-side states with |<x>| > 0.5: %d/%d = %.3f "
               "(>= 0.90) [J/g':%s]; %.1f s",
               exact ? "yes" : "no", loc, tot, frac, per.c_str(), c.seconds()));
}

void dos_structure() {
    std::string detail;
    bool ok = true;
    {
        Clock c;
        const auto h = dos(diagonalize(ModelParams::from_J_over_gprime(400, 100.0)), 101);
        const double m = h.mean_count();
        double worst = 0;
        for (int n : h.counts) worst = std::max(worst, std::abs(n - m) / std::sqrt(m));
        ok &= worst <= 3.0 && c.seconds() < 60;
        detail += fmt("J/g'=100 max |n - mean|/sqrt(mean) = %.2f (<= 3);", worst);
    }
    {
        Clock c;
        const auto p = ModelParams::from_J_over_gprime(400, 0.25);
        const auto h = dos(diagonalize(p), 101);
        const double m = h.mean_count(), edge = std::sqrt(2.0) * p.gprime();
        const double halfbin = 0.5 * (h.edges[1] - h.edges[0]);
        int worst = 0, nb = 0;
        for (int k = 0; k < int(h.counts.size()); ++k)
            if (std::abs(std::abs(h.center(k)) - edge) <= 1.5 * halfbin) {
                worst = std::max(worst, h.counts[k]);
                ++nb;
            }
        ok &= nb > 0 && worst < 0.2 * m && c.seconds() < 60;
        detail += fmt(" J/g'=1/4 %d bins at +-g'sqrt2 max count %d (< %.1f);", nb, worst, 0.2 * m);
    }
    for (double r : {0.5, 1.0}) {
        Clock c;
        const auto p = ModelParams::from_J_over_gprime(400, r);
        const auto h = dos(diagonalize(p), 101);
        const double m = h.mean_count(), ec = 2 * p.gprime() - p.J;
        const double w = h.edges[1] - h.edges[0];
        for (double target : {ec, -ec}) {
            int peak = 0;
            for (int k = 0; k < int(h.counts.size()); ++k)
                if (std::abs(h.center(k) - target) <= 3 * w) peak = std::max(peak, h.counts[k]);
            ok &= peak > 1.5 * m;
            detail += fmt(" J/g'=%g peak near %+.2f: %d (> %.1f);", r, target, peak, 1.5 * m);
        }
        ok &= c.seconds() < 60;
    }
    report(5, ok, detail);
}

void classical_threshold() {
    Clock c;
    const int N = 100;
    const double J = 1.0;
    classical::ScanOptions o;
    o.threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<double> th, cp;
    for (int i = 0; i < 20; ++i) th.push_back(kPi * (0.05 + 0.9 * i / 19.0));
    for (int j = 0; j < 30; ++j) cp.push_back(0.5 + 3.0 * j / 29.0);
    const auto scan = classical::threshold_scan(th, cp, N, J, o);
    const double t_grid = c.seconds();

    // grid thresholds against the pendulum curve where both exist
    double grid_dev = 0;
    int ngrid = 0;
    for (std::size_t i = 0; i < th.size(); ++i)
        if (th[i] >= 0.2 * kPi && std::isfinite(scan.threshold[i])) {
            grid_dev = std::max(grid_dev, std::abs(scan.threshold[i] / classical::pendulum_critical(th[i]) - 1));
            ++ngrid;
        }

    Clock cr;
    const double mid = classical::refine_threshold(kPi / 2, 0.7, 1.4, N, J, o, 1e-3);
    double worst = 0;
    std::string per;
    for (int i = 0; i < 8; ++i) {
        const double t = kPi * (0.2 + 0.75 * i / 7.0);
        const double pc = classical::pendulum_critical(t);
        double v = std::nan("");
        try {
            v = classical::refine_threshold(t, 0.7 * pc, 1.4 * pc, N, J, o, 2e-3 * pc);
        } catch (const std::exception&) {
        }
        const double dev = std::isfinite(v) ? std::abs(v / pc - 1) : INFINITY;
        worst = std::max(worst, dev);
        per += fmt(" %.3fpi:%.3f/%.3f", t / kPi, v, pc);
    }
    report(6, std::abs(mid - 1.0) <= 0.05 && worst <= 0.05 && t_grid < 600,
           fmt("threshold at theta_R=pi/2: %.3f (1.00 +- 0.05); refined vs pendulum max rel. dev %.3f (<= 0.05) "
               "[%s ]; 20x30 grid %.0f s (< 600 s), grid vs pendulum max dev %.3f over %d rows; refine %.0f s",
               mid, worst, per.c_str(), t_grid, grid_dev, ngrid, cr.seconds()));
}

void dynamics_integrity() {
    Clock c;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> th(0.2, kPi - 0.2), ph(-kPi, kPi), a(-7.0, 7.0);
    const double J = 1.0;
    double drift = 0;
    for (int k = 0; k < 5; ++k) {
        classical::ClassicalState s;
        s.L = {th(rng), ph(rng), a(rng), a(rng)};
        s.R = {th(rng), ph(rng), a(rng), a(rng)};
        drift = std::max(drift, classical::integrate(s, {0.8, J}, 100.0 / J, 1e-12).energy_drift);
    }

    const int N = 100;
    classical::ClassicalState js;
    js.L = {0.0, 0.0, std::sqrt(double(N)), 0.0};
    const auto tr = classical::integrate(js, {0.0, J}, 100.0 / J, 1e-13, 0.25 / J);
    double jerr = 0;
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        const double t = tr.t[k];
        jerr = std::max(jerr, std::abs(tr.y[k][6] - std::sqrt(double(N)) * std::cos(J * t)));
        jerr = std::max(jerr, std::abs(tr.y[k][9] - std::sqrt(double(N)) * std::sin(J * t)));
    }
    jerr /= std::sqrt(double(N));

    double leak = 0;
    for (double g : {0.3, 1.5, 6.0}) {
        const auto s = classical::embed_restricted({0.7, 2.0, 1.1, -0.4});
        const auto r = classical::integrate(s, {g, J}, 10.0 / J, 1e-12, 0.05 / J);
        for (const auto& y : r.y) leak = std::max({leak, std::abs(y[0]), std::abs(y[4]), std::abs(y[7]), std::abs(y[8])});
    }
    report(7, drift < 1e-8 && jerr < 1e-9 && leak < 1e-10,
           fmt("E_cl relative drift over 100/J %.2e (< 1e-8); g=0 vs Josephson solution %.2e (< 1e-9); "
               "restricted-manifold leakage over 10/J %.2e (< 1e-10); %.1f s",
               drift, jerr, leak, c.seconds()));
}

void poincare_sequence() {
    Clock c;
    const std::vector<double> eta{0.088, 0.311, 0.442, 1.41};
    std::vector<double> fill;
    std::string per;
    bool complete = true;
    for (double e : eta) {
        const classical::Couplings cp{e * 2.0, 1.0};  // N = 1, J = 1
        double sum = 0;
        int n = 0;
        for (double r0 : {0.05, 0.2, 0.4, 0.7, 1.0})
            for (double t : {0.3, 1.5, 2.8}) {
                const auto res = classical::poincare_section({0.0, t, r0, 0.0}, cp, 1, 1000, 0.0, 3e6);
                complete &= res.complete;
                sum += classical::section_fill(res);
                ++n;
            }
        fill.push_back(sum / n);
        per += fmt(" %.3f:%.3f", e, sum / n);
    }
    bool mono = true;
    for (std::size_t k = 1; k < fill.size(); ++k) mono &= fill[k] > fill[k - 1];
    report(8, mono && complete,
           fmt("mean section fill rises monotonically with g/(2J sqrt N):%s; %.1f s", per.c_str(), c.seconds()));
}

void husimi_topology() {
    Clock c;
    bool ok = true;
    std::string detail;
    {
        const auto p = ModelParams::from_J_over_gprime(100, 1.0 / 3);
        const auto sol = diagonalize(p);
        const auto g = husimi::husimi_q(sol, 0, 1.0);
        Eigen::Index i, j;
        g.Q.maxCoeff(&i, &j);
        const auto m = husimi::moments(g);
        const auto w = husimi::smoothed_widths(p, g.kappa);
        const double ex = std::sqrt(m.var_x) / w.sigma_x - 1, et = std::sqrt(m.var_theta) / w.sigma_theta - 1;
        const bool peak = std::abs(g.x[i]) < 1e-9 && std::abs(g.theta[j]) < 1e-9;
        ok &= peak && std::abs(ex) <= 0.1 && std::abs(et) <= 0.1;
        detail += fmt("N=100 ground peak at (%.2g, %.2g), widths off by %+.3f / %+.3f (<= 0.10);", g.x[i], g.theta[j],
                      ex, et);
    }
    for (int N : {100, 20, 10, 6}) {
        const auto p = ModelParams::from_J_over_gprime(N, 1.0 / 3);
        const auto sol = diagonalize(p);
        const double e0 = sol.eps[0], ec = wkb::critical_energy(p, 4), top = -std::sqrt(2.0) * p.gprime();
        const int ng = husimi::nearest_band4_state(sol, e0), no = husimi::nearest_band4_state(sol, 0.5 * (e0 + ec));
        const int ns = husimi::nearest_band4_state(sol, ec), nl = husimi::nearest_band4_state(sol, 0.5 * (ec + top));
        auto comps = [&](int n) { return husimi::count_components(husimi::husimi_q(sol, n)); };
        const bool ring_sep = husimi::ring_like(husimi::husimi_q(sol, ns));
        const bool ring_gnd = husimi::ring_like(husimi::husimi_q(sol, ng));
        const int cg = comps(ng), co = comps(no), cs = comps(ns);
        bool good = cg == 1 && !ring_gnd && co == 1 && cs == 1 && ring_sep;
        // a localized level needs its own state above the separatrix one
        const bool has_loc = nl != ns && sol.eps[nl] > ec;
        int cl = -1;
        if (has_loc) {
            cl = comps(nl);
            good &= cl == 2;
        }
        ok &= good;
        detail += fmt(" N=%d comps gnd/osc/sep/loc = %d/%d/%d%s/%s;", N, cg, co, cs, ring_sep ? "(ring)" : "",
                      has_loc ? std::to_string(cl).c_str() : "none");
    }
    detail += fmt(" %.1f s", c.seconds());
    report(9, ok, detail);
}

void property_suite() {
    Clock c;
    bool ok = true;
    std::string detail;

    const auto p = ModelParams::from_J_over_gprime(120, 0.3);
    const auto b = enumerate_basis(p.N);
    const auto H = assemble_hamiltonian(p, b);
    const auto D = H.dense();
    const double herm = (D - D.transpose()).cwiseAbs().maxCoeff();
    ok &= herm == 0.0;
    detail += fmt("hermiticity %.1e;", herm);

    const auto sol = diagonalize(H, p, b);
    const double res = max_eigen_residual(H, sol) / std::max(1.0, H.max_abs());
    ok &= res < 1e-10;
    detail += fmt(" eigen-residual %.1e;", res);

    double par = 0;
    for (int n = 0; n < sol.size(); ++n) {
        const auto pr = sol.profile(n);
        for (int k = 0; k <= p.N; ++k) par = std::max(par, std::abs(pr[k] - pr[p.N - k]));
    }
    ok &= par < 1e-8;
    detail += fmt(" profile parity %.1e;", par);

    wkb::Options fine;
    fine.quad_tol = 0.5e-12;
    double conv = 0;
    for (double e : {-2.2, -1.9, -1.6, -1.45}) {
        conv = std::max(conv, std::abs(wkb::action_S(p, 4, e) - wkb::action_S(p, 4, e, fine)));
        conv = std::max(conv, std::abs(wkb::action_Q(p, 4, e) - wkb::action_Q(p, 4, e, fine)));
    }
    ok &= conv < 1e-9;
    detail += fmt(" action quadrature %.1e;", conv);

    double cont = 0;
    for (double x : {-0.5, 0.0, 0.3}) {
        const double lo = wkb::potential(p, 4, wkb::Edge::Low, x), d = 1e-12;
        cont = std::max({cont, wkb::momentum_allowed(p, 4, lo + d, x), wkb::momentum_forbidden(p, 4, lo - d, x)});
    }
    ok &= cont < 1e-5;
    detail += fmt(" momentum continuity %.1e;", cont);

    double gam = 0;
    for (double y : {0.0, 0.5, 1.0, 5.0, 20.0, 50.0}) {
        const double lhs = 2.0 * complex_log_gamma({0.5, y}).real();
        const double rhs = std::log(kPi) - std::log(std::cosh(kPi * y));
        gam = std::max(gam, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    ok &= gam < 1e-12;
    detail += fmt(" |Gamma(1/2+iy)|^2 identity %.1e; %.2f s", gam, c.seconds());
    report(10, ok, detail);
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> steps = {
        oracle_equivalence, quantization_defects, splitting_law, phase_boundary_check, dos_structure,
        classical_threshold, dynamics_integrity,  poincare_sequence, husimi_topology,  property_suite};
    for (std::size_t k = 0; k < steps.size(); ++k) {
        try {
            steps[k]();
        } catch (const std::exception& e) {
            report(int(k) + 1, false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, steps.size());
    return failures == 0 ? 0 : 1;
}
