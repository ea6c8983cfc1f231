#include "doctest.h"

#include <algorithm>
#include <cmath>

#include <jcdm/spectra.hpp>
#include <jcdm/wkb.hpp>

using namespace jcdm;
using namespace jcdm::wkb;

namespace {

constexpr double kPi = 3.14159265358979323846;

// g' = 1, J = 1/4
ModelParams quarter(int N) { return ModelParams::from_J_over_gprime(N, 0.25); }

// composite Simpson in t with x = z sin t: kills the sqrt endpoint of a decay integrand
double simpson_sin(const std::function<double(double)>& f, double z, int n = 4000) {
    const double h = 0.5 * kPi / n;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = k * h;
        const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
        s += w * f(z * std::sin(t)) * z * std::cos(t);
    }
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("potential curves") {
    const auto p = quarter(100);
    const double gp = p.gprime(), J = p.J;
    CHECK(potential(p, 1, Edge::Low, 0.0) == doctest::Approx(2 * gp - J));
    CHECK(potential(p, 1, Edge::Low, 1.0) == doctest::Approx(std::sqrt(2.0) * gp));
    CHECK(potential(p, 1, Edge::Low, -1.0) == doctest::Approx(std::sqrt(2.0) * gp));
    CHECK(potential(p, 4, Edge::High, 0.0) == doctest::Approx(-2 * gp + J));
    for (double x = -1.0; x <= 1.0; x += 0.125) {
        CHECK(potential(p, 4, Edge::High, x) == doctest::Approx(-potential(p, 1, Edge::Low, -x)));
        CHECK(W(p, 3, x) == doctest::Approx(-W(p, 2, x)));
        CHECK(W(p, 4, x) == doctest::Approx(-W(p, 1, x)));
        CHECK(W(p, 1, x) == doctest::Approx(gp * (std::sqrt(1 + x) + std::sqrt(1 - x))));
        CHECK(W(p, 2, x) == doctest::Approx(gp * (std::sqrt(1 + x) - std::sqrt(1 - x))));
    }
    CHECK_THROWS_AS(potential(p, 1, Edge::Low, 1.01), std::domain_error);
}

TEST_CASE("momenta at the turning lines") {
    const auto p = quarter(100);
    for (int band = 1; band <= 4; ++band)
        for (double x : {-0.6, 0.0, 0.35}) {
            const double lo = potential(p, band, Edge::Low, x), hi = potential(p, band, Edge::High, x);
            CHECK(momentum_allowed(p, band, lo, x) == doctest::Approx(0.0).epsilon(1e-7));
            CHECK(momentum_allowed(p, band, hi, x) == doctest::Approx(kPi / 2));
            CHECK(momentum_tilde(p, band, hi, x) == doctest::Approx(0.0).epsilon(1e-7));
            CHECK(momentum_tilde(p, band, W(p, band, x), x) == doctest::Approx(kPi / 4));
            CHECK(momentum_forbidden(p, band, lo, x) == doctest::Approx(0.0).epsilon(1e-7));
            CHECK_THROWS_AS(momentum_allowed(p, band, lo - 0.1, x), std::domain_error);
            CHECK_THROWS_AS(momentum_forbidden(p, band, 0.5 * (lo + hi), x), std::domain_error);
        }
    CHECK(momentum_allowed(p, 4, -2.0 * p.gprime(), 0.0) == doctest::Approx(kPi / 4));
    // ratio cosh 2 at x = 0 in band 4
    CHECK(momentum_forbidden(p, 4, -2.0 * p.gprime() - p.J * std::cosh(2.0), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("branch continuity across the turning line") {
    const auto p = quarter(100);
    const double x = 0.2, lo = potential(p, 4, Edge::Low, x);
    for (double d : {1e-4, 1e-6, 1e-8}) {
        CHECK(momentum_allowed(p, 4, lo + d, x) < 2 * std::sqrt(d / p.J) + 1e-9);
        CHECK(momentum_forbidden(p, 4, lo - d, x) < 2 * std::sqrt(d / p.J) + 1e-9);
    }
}

TEST_CASE("turning points") {
    const auto p = quarter(100);
    const double gp = p.gprime(), J = p.J;
    CHECK(turning_points(p, 4, -2 * gp - J).z_l == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(y_r(p, -std::sqrt(2.0) * gp) == doctest::Approx(1.0));
    CHECK_THROWS_AS(turning_points(p, 4, -2 * gp - J - 0.01), std::domain_error);

    const double mid = -2.0 * gp;  // middle of the delocalized window
    const double zc = turning_point_closed_form(p, 4, Edge::Low, mid);
    const double zb = turning_point_bisect(p, 4, Edge::Low, mid, 0.0, 1.0);
    CHECK(std::abs(zc - zb) < 1e-10);

    for (double e : {-2.2, -1.9, -1.74, -1.6, -1.45}) {
        const auto g = turning_points(p, 4, e);
        CHECK(std::abs(potential(p, 4, Edge::Low, g.z_l) - e) < 1e-10);
        CHECK(g.y_r >= 0.0);
        CHECK(g.y_r <= 1.0);
        if (g.has_zh) {
            CHECK(std::abs(potential(p, 4, Edge::High, g.z_h) - e) < 1e-10);
            CHECK(g.z_h >= 0.0);
            CHECK(g.z_h <= g.z_l);
        }
        CHECK(g.z_l <= 1.0);
    }
    CHECK(turning_points(p, 4, -1.9).regime == Regime::Delocalized);
    CHECK(turning_points(p, 4, -1.6).regime == Regime::Localized);
    CHECK(turning_points(p, 4, critical_energy(p, 4)).regime == Regime::Critical);
    CHECK(turning_points(p, 2, 0.3).regime == Regime::Middle);
}

TEST_CASE("band 1 mirrors band 4") {
    const auto p = quarter(100);
    for (double e : {-2.2, -1.9, -1.6, -1.45}) {
        const auto g4 = turning_points(p, 4, e), g1 = turning_points(p, 1, -e);
        CHECK(g1.z_l == doctest::Approx(g4.z_l));
        CHECK(g1.z_h == doctest::Approx(g4.z_h));
        CHECK(g1.regime == g4.regime);
        CHECK(action_S(p, 1, -e) == doctest::Approx(action_S(p, 4, e)).epsilon(1e-10));
        CHECK(action_Q(p, 1, -e) == doctest::Approx(action_Q(p, 4, e)).epsilon(1e-10));
    }
}

TEST_CASE("actions") {
    const auto p = quarter(400);
    const auto env = band_envelope(p, 4);
    CHECK(action_S(p, 4, env[0] + 1e-12) < 1e-5);

    // monotone in the delocalized window
    const double ec = critical_energy(p, 4), w = critical_halfwidth(p);
    double prev = -1.0;
    for (int k = 1; k < 200; ++k) {
        const double e = env[0] + (ec - w - env[0]) * k / 200.0;
        const double s = action_S(p, 4, e);
        CHECK(s > prev);
        prev = s;
    }

    // barrier closes at the critical level
    CHECK(action_Q(p, 4, ec + 1e-7) < 1e-3);
    CHECK(action_Q(p, 4, ec + 0.01) < action_Q(p, 4, ec + 0.05));

    // tunnelling action against an independent quadrature of the decay rate
    const double e = -1.6;
    const auto g = turning_points(p, 4, e);
    const double q = 2.0 * simpson_sin([&](double x) { return momentum_forbidden(p, 4, e, x); }, g.z_h);
    CHECK(action_Q(p, 4, e) == doctest::Approx(q).epsilon(1e-7));
}

TEST_CASE("action quadrature is converged") {
    const auto p = quarter(400);
    Options a, b;
    b.quad_tol = 0.5 * a.quad_tol;
    for (double e : {-2.1, -1.8, -1.6, -1.45}) {
        CHECK(std::abs(action_S(p, 4, e, a) - action_S(p, 4, e, b)) < 1e-9);
        CHECK(std::abs(action_Q(p, 4, e, a) - action_Q(p, 4, e, b)) < 1e-9);
    }
}

TEST_CASE("consecutive exact levels advance the action by pi") {
    const auto p = quarter(400);
    const auto sol = diagonalize(p);
    const double top = critical_energy(p, 4) - critical_halfwidth(p);
    int checked = 0;
    for (int n = 0; n + 1 < sol.size() && sol.eps[n + 1] < top; ++n) {
        const double d = (action_S(p, 4, sol.eps[n + 1]) - action_S(p, 4, sol.eps[n])) / p.h();
        CHECK(std::abs(d - kPi) < 0.05);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("level spacing equals 2 pi / (N T) of the classical orbit") {
    const auto p = quarter(400);
    const auto sol = diagonalize(p);
    const int n = 40;
    const auto g = turning_points(p, 4, sol.eps[n]);
    const auto orb = classical_orbit(p, 4, g.z_l);
    CHECK(orb.eps == doctest::Approx(sol.eps[n]).epsilon(1e-10));
    CHECK(std::abs(orb.mean_x) < 1e-8);
    const double spacing = 0.5 * (sol.eps[n + 1] - sol.eps[n - 1]);
    CHECK(2 * kPi / (p.N * orb.period) == doctest::Approx(spacing).epsilon(0.02));
}

TEST_CASE("band-1 slow phase quantizes delocalized levels") {
    const auto p = quarter(400);
    const auto sol = diagonalize(p);
    const double ec = critical_energy(p, 1) + critical_halfwidth(p);
    int checked = 0;
    for (int n = sol.size() - 1; n >= 0 && sol.eps[n] > ec + 0.02; n -= 9) {
        const double e = sol.eps[n];
        const auto g = turning_points(p, 1, e);
        // independent Simpson in t with x = z_l sin t
        const double S = simpson_sin([&](double x) { return momentum_tilde(p, 1, e, std::clamp(x, -g.z_l, g.z_l)); }, g.z_l);
        const double v = 2.0 * S / p.h() - 0.5 * kPi;
        CHECK(std::abs(v - kPi * std::round(v / kPi)) < 0.05);
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("solve_levels") {
    const auto p = quarter(400);
    const auto sol = diagonalize(p);
    const auto lv = solve_levels(p, 4, Regime::Delocalized);
    REQUIRE(!lv.empty());
    for (const auto& l : lv) CHECK(quantization_residual(p, 4, Regime::Delocalized, l.eps) < 1e-9);
    const double spacing = sol.eps[1] - sol.eps[0];
    CHECK(std::abs(lv[0].eps - sol.eps[0]) < 0.1 * spacing);

    const double lo = -2 * p.gprime() - p.J, hi = critical_energy(p, 4) - critical_halfwidth(p);
    int exact = 0;
    for (int n = 0; n < sol.size(); ++n) exact += sol.eps[n] > lo && sol.eps[n] < hi;
    CHECK(std::abs(int(lv.size()) - exact) <= 1);
    CHECK_THROWS_AS(solve_levels(p, 2, Regime::Localized), std::domain_error);
}

TEST_CASE("middle-band conditions give the same levels") {
    const auto p = quarter(40);
    const auto a = solve_levels(p, 2, Regime::Middle), b = solve_levels(p, 3, Regime::Middle);
    REQUIRE(a.size() > 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].eps == doctest::Approx(b[k].eps).epsilon(1e-8));
}

TEST_CASE("critical rule beats the standard rule near the separatrix") {
    const auto p = quarter(400);
    const auto sol = diagonalize(p);
    double s = 0, c = 0;
    int m = 0;
    for (int n = 0; n < sol.size(); ++n) {
        const auto d = defect(p, sol.eps[n]);
        if (d.regime != Regime::Critical) continue;
        s += d.standard;
        c += d.critical;
        ++m;
        CHECK(d.matched == d.critical);
    }
    REQUIRE(m > 5);
    CHECK(s > 5 * c);
}

TEST_CASE("predicted splitting") {
    const double e = -1.74;
    CHECK(predicted_splitting(quarter(200), e) < 1e-3 * predicted_splitting(quarter(100), e));
    const auto p = quarter(100);
    CHECK(predicted_splitting(p, -1.745) > predicted_splitting(p, -1.735));
    CHECK_THROWS_AS(predicted_splitting(p, -2.0), std::domain_error);
}

TEST_CASE("phase boundary") {
    CHECK(phase_boundary_g_over_J(1.0, 400) == 40.0);
    CHECK(phase_boundary_g_over_J(1.0, 7) == doctest::Approx(2 * std::sqrt(7.0)).epsilon(1e-15));
    CHECK(phase_boundary(1.0) == doctest::Approx(std::sqrt(2.0)));
    // small x0 needs twice the coupling of x0 = 1, in g/(J sqrt 2N) units
    CHECK(phase_boundary(1e-6) == doctest::Approx(2.0));
    for (int i = 1; i <= 8; ++i) CHECK(phase_boundary(0.1 * i) > phase_boundary(0.1 * (i + 1)));
    CHECK(localization_edge(0.3) == 0.0);
    CHECK(localization_edge(0.8) == 1.0);
    const double xm = barrier_position(0.6);
    const auto p = ModelParams::from_J_over_gprime(100, 0.6);
    const double d = 1e-5;
    CHECK(potential(p, 1, Edge::Low, xm) > potential(p, 1, Edge::Low, xm - d));
    CHECK(potential(p, 1, Edge::Low, xm) > potential(p, 1, Edge::Low, xm + d));
}

TEST_CASE("classical orbits in band 1") {
    const auto loc = ModelParams::from_J_over_gprime(100, 0.25);
    const auto o = classical_orbit(loc, 1, 0.6);
    CHECK(o.period > 0);
    CHECK(o.mean_x > 0.5);
    CHECK(o.a == doctest::Approx(0.6));
    const auto del = ModelParams::from_J_over_gprime(100, 1.0);
    const auto d = classical_orbit(del, 1, 0.6);
    CHECK(std::abs(d.mean_x) < 1e-8);
    CHECK(d.a == doctest::Approx(-0.6).epsilon(1e-6));
}

TEST_CASE("WKB wavefunctions against exact band components") {
    const auto p = quarter(100);
    const auto sol = diagonalize(p);
    const int N = p.N;
    std::vector<double> xs;
    for (int k = 0; k <= N; ++k) xs.push_back(double(2 * k - N) / N);
    for (int n : {0, 5, 20, 40, 60}) {
        const auto C = sol.band_components(n);
        const auto w = wkb_wavefunction(p, 4, sol.eps[n], xs, sol.parity[n]);
        double a = 0, b = 0, ab = 0;
        int nodes = 0;
        for (int k = 0; k <= N; ++k) {
            a += C(k, 3) * C(k, 3);
            b += w[k] * w[k];
            ab += C(k, 3) * w[k];
            if (k && w[k] * w[k - 1] < 0) ++nodes;
        }
        CHECK(std::abs(ab) / std::sqrt(a * b) > 0.98);
        CHECK(nodes == n);
    }
    // localized doublet: weight sits outside the barrier (skip the turning-point layer)
    const double e = sol.eps[90];
    REQUIRE(turning_points(p, 4, e).has_zh);
    const auto g = turning_points(p, 4, e);
    const auto w = wkb_wavefunction(p, 4, e, xs, +1);
    double in = 0, out = 0;
    for (int k = 0; k <= N; ++k) {
        const double ax = std::abs(xs[k]);
        if (ax < g.z_h - 0.1) in += w[k] * w[k];
        else if (ax > g.z_h) out += w[k] * w[k];
    }
    CHECK(in < 1e-3 * out);
}

TEST_CASE("first-order band mixing") {
    for (const auto& p : {quarter(100), ModelParams::from_J_over_gprime(100, 1.0)}) {
        const double c = first_order_correction(p, 4, -2.1, 0.1);
        CHECK(std::isfinite(c));
        CHECK(c >= 0.0);
        CHECK(c < 1.0);
    }
    const auto B = first_order_coupling(1.0, 0.3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(B[i][j] == B[j][i]);
}
