#include "jcdm/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "jcdm/quadrature.hpp"
#include "jcdm/special.hpp"

namespace jcdm::wkb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap_pi(double y) { return y - kPi * std::round(y / kPi); }

double clamp1(double r) { return std::clamp(r, -1.0, 1.0); }

void check_band(int band) {
    if (band < 1 || band > 4) throw std::domain_error("band index must be 1..4");
}

double jgp(const ModelParams& p) { return p.J / p.gprime(); }

bool has_critical_rule(const ModelParams& p) { return p.J > 0.0 && jgp(p) < 0.5; }

// Band 1 is the chiral mirror of band 4 (eps -> -eps, phi <-> phi~), band 3
// the x -> -x mirror of band 2; geometry is always built for band 4 or 2.
double base_eps(int band, double eps) { return band == 1 ? -eps : eps; }

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) return kNaN;
    std::uintmax_t it = 200;
    auto done = [](double a, double b) { return b - a <= 1e-15; };
    const auto r = boost::math::tools::bisect(f, lo, hi, done, it);
    return 0.5 * (r.first + r.second);
}

// integral of Re phi (base band) on [a, b], split at turning points
double int_re_phi(const ModelParams& p, const BandGeometry& g, double a, double b, double tol) {
    if (a == b) return 0.0;
    double sgn = 1.0;
    if (b < a) { std::swap(a, b); sgn = -1.0; }
    std::vector<double> cuts = {a};
    for (double z : {g.z_h, g.z_l, -g.z_h, -g.z_l})
        if (z > a && z < b) cuts.push_back(z);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const int band = g.band == 1 || g.band == 4 ? 4 : 2;
    const double e = g.band == 1 ? -g.eps : g.eps;
    auto f = [&](double x) { return momentum_real(p, band, e, x); };
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        s += integrate_endpoint_singular(f, cuts[k], cuts[k + 1], tol);
    return sgn * s;
}

double int_decay(const ModelParams& p, int band, double eps, double a, double b, double tol) {
    auto f = [&](double x) {
        const double r = momentum_ratio(p, band, eps, x);
        return std::abs(r) >= 1.0 ? 0.5 * std::acosh(std::abs(r)) : 0.0;
    };
    return integrate_endpoint_singular(f, a, b, tol);
}

double log_abs_term(double chi) { return chi == 0.0 ? 0.0 : 0.5 * chi * std::log(std::abs(chi)); }

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Delocalized: return "delocalized";
        case Regime::Localized: return "localized";
        case Regime::Critical: return "critical";
        case Regime::Middle: return "middle";
    }
    return "?";
}

double W(const ModelParams& p, int band, double x) {
    check_band(band);
    const double gp = p.gprime();
    const double ap = std::sqrt(std::max(0.0, 1.0 + x));
    const double am = std::sqrt(std::max(0.0, 1.0 - x));
    switch (band) {
        case 1: return gp * (ap + am);
        case 2: return gp * (ap - am);
        case 3: return gp * (am - ap);
        default: return -gp * (ap + am);
    }
}

double potential(const ModelParams& p, int band, Edge edge, double x) {
    if (!(std::abs(x) <= 1.0 + 1e-14)) throw std::domain_error("potential: |x| > 1");
    x = std::clamp(x, -1.0, 1.0);
    const double hop = p.J * std::sqrt(std::max(0.0, 1.0 - x * x));
    return edge == Edge::Low ? W(p, band, x) - hop : W(p, band, x) + hop;
}

double momentum_ratio(const ModelParams& p, int band, double eps, double x) {
    const double d = p.J * std::sqrt(std::max(0.0, 1.0 - x * x));
    const double num = eps - W(p, band, x);
    if (d == 0.0) {
        if (num == 0.0) return 0.0;
        return num > 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    }
    return -num / d;
}

double momentum_allowed(const ModelParams& p, int band, double eps, double x) {
    const double r = momentum_ratio(p, band, eps, x);
    if (std::abs(r) > 1.0 + 1e-12) throw std::domain_error("momentum_allowed: x outside allowed region");
    return 0.5 * std::acos(clamp1(r));
}

double momentum_tilde(const ModelParams& p, int band, double eps, double x) {
    const double r = momentum_ratio(p, band, eps, x);
    if (std::abs(r) > 1.0 + 1e-12) throw std::domain_error("momentum_tilde: x outside allowed region");
    return 0.5 * std::acos(clamp1(-r));
}

// below V^l the ratio exceeds +1; above V^h it is below -1 and the decay is
// measured from the 2phi = pi edge, so both use |ratio|
double momentum_forbidden(const ModelParams& p, int band, double eps, double x) {
    const double r = momentum_ratio(p, band, eps, x);
    if (std::abs(r) < 1.0 - 1e-12) throw std::domain_error("momentum_forbidden: ratio magnitude < 1");
    return 0.5 * std::acosh(std::max(1.0, std::abs(r)));
}

double momentum_real(const ModelParams& p, int band, double eps, double x) {
    return 0.5 * std::acos(clamp1(momentum_ratio(p, band, eps, x)));
}

double critical_energy(const ModelParams& p, int band) {
    if (band == 4) return p.J - 2.0 * p.gprime();
    if (band == 1) return 2.0 * p.gprime() - p.J;
    throw std::domain_error("critical_energy: only bands 1 and 4 have a critical level");
}

double critical_halfwidth(const ModelParams& p, const Options& o) {
    if (p.N < 2) return 0.0;
    return o.critical_c * p.J / p.N * std::log(double(p.N));
}

std::array<double, 2> band_envelope(const ModelParams& p, int band) {
    check_band(band);
    const double gp = p.gprime();
    if (band == 4) return {-2.0 * gp - p.J, std::max(-std::sqrt(2.0) * gp, p.J - 2.0 * gp)};
    if (band == 1) return {std::min(std::sqrt(2.0) * gp, 2.0 * gp - p.J), 2.0 * gp + p.J};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const int M = 20000;
    for (int k = 0; k <= M; ++k) {
        const double x = -1.0 + 2.0 * k / M;
        lo = std::min(lo, potential(p, band, Edge::Low, x));
        hi = std::max(hi, potential(p, band, Edge::High, x));
    }
    return {lo, hi};
}

int band_of(const ModelParams& p, double eps) {
    const double edge = std::sqrt(2.0) * p.gprime();
    if (eps < -edge) return 4;
    if (eps > edge) return 1;
    return 2;
}

double y_r(const ModelParams& p, double eps) {
    const double gp = p.gprime();
    const double q = eps / (2.0 * gp);
    return std::min(1.0, std::abs(eps) / gp * std::sqrt(std::max(0.0, 1.0 - q * q)));
}

double turning_point_closed_form(const ModelParams& p, int band, Edge edge, double eps) {
    if (band != 1 && band != 4) throw std::domain_error("closed-form turning point only for bands 1 and 4");
    if (p.J <= 0.0) return kNaN;
    double e = eps;
    Edge ed = edge;
    if (band == 1) {  // V_1^l(x) = -V_4^h(x)
        e = -eps;
        ed = edge == Edge::Low ? Edge::High : Edge::Low;
    }
    const double gp = p.gprime(), J = p.J;
    const double sg = ed == Edge::Low ? 1.0 : -1.0;
    const double a = gp * gp - sg * e * J;
    const double rad = gp * gp + 2.0 * J * J - sg * 2.0 * e * J;
    if (rad < 0.0) return kNaN;
    const double v = (e * e + J * J - 2.0 * gp * gp) * J * J - 2.0 * a * a + 2.0 * std::abs(a) * std::sqrt(rad);
    if (v < 0.0) return kNaN;
    const double z = std::sqrt(v) / (J * J);
    if (z > 1.0 + 1e-12) return kNaN;
    const double zc = std::min(z, 1.0);
    if (std::abs(potential(p, band, edge, zc) - eps) > 1e-8 * std::max(1.0, std::abs(eps))) return kNaN;
    return zc;
}

double turning_point_bisect(const ModelParams& p, int band, Edge edge, double eps, double lo, double hi) {
    return bisect([&](double x) { return potential(p, band, edge, x) - eps; }, lo, hi);
}

BandGeometry turning_points(const ModelParams& p, int band, double eps, const Options& o) {
    check_band(band);
    const auto env = band_envelope(p, band);
    const double slack = 1e-12 * std::max(1.0, std::abs(eps));
    if (eps < env[0] - slack || eps > env[1] + slack) throw std::domain_error("turning_points: eps outside band envelope");

    BandGeometry g;
    g.band = band;
    g.eps = eps;
    g.y_r = y_r(p, eps);

    if (band == 1 || band == 4) {
        const double e = base_eps(band, eps);
        double zl = turning_point_closed_form(p, 4, Edge::Low, e);
        if (std::isnan(zl)) zl = turning_point_bisect(p, 4, Edge::Low, e, 0.0, 1.0);
        if (std::isnan(zl)) zl = e <= potential(p, 4, Edge::Low, 0.0) ? 0.0 : 1.0;
        g.z_l = zl;
        const double ec = critical_energy(p, 4);
        if (e > potential(p, 4, Edge::High, 0.0)) {
            double zh = turning_point_closed_form(p, 4, Edge::High, e);
            if (std::isnan(zh)) zh = turning_point_bisect(p, 4, Edge::High, e, 0.0, g.z_l);
            if (!std::isnan(zh)) {
                g.z_h = zh;
                g.has_zh = true;
            }
        }
        if (has_critical_rule(p) && std::abs(e - ec) <= critical_halfwidth(p, o)) g.regime = Regime::Critical;
        else if (e < ec) g.regime = Regime::Delocalized;
        else g.regime = Regime::Localized;
        return g;
    }

    // middle bands, built on band 2 where z_h < z_l
    auto last_root = [&](Edge edge, double fallback) {
        const int M = 400;
        double prev = potential(p, 2, edge, -1.0) - eps;
        double root = kNaN;
        for (int k = 1; k <= M; ++k) {
            const double x0 = -1.0 + 2.0 * (k - 1) / M, x1 = -1.0 + 2.0 * k / M;
            const double cur = potential(p, 2, edge, x1) - eps;
            if ((prev <= 0 && cur > 0) || (prev >= 0 && cur < 0)) root = turning_point_bisect(p, 2, edge, eps, x0, x1);
            prev = cur;
        }
        return std::isnan(root) ? fallback : root;
    };
    g.z_l = last_root(Edge::Low, 1.0);
    g.z_h = last_root(Edge::High, -1.0);
    g.has_zh = g.z_h > -1.0;
    g.regime = Regime::Middle;
    return g;
}

ActionPair actions(const ModelParams& p, const BandGeometry& g, const Options& o) {
    ActionPair a;
    const double tol = o.quad_tol;
    if (g.regime == Regime::Middle) {
        // dS_eff = int_{y_r}^{z_l} phi - int_{z_h}^{y_r} phi~ with phi~ = pi/2 - phi
        const double y = g.y_r;
        const double s1 = int_re_phi(p, g, y, g.z_l, tol);
        const double s2 = 0.5 * kPi * (y - g.z_h) - int_re_phi(p, g, g.z_h, y, tol);
        a.dS = s1 - s2;
        if (g.band == 3) a.dS = -a.dS;  // F6b integrates the mirrored limits
        return a;
    }
    const double e = base_eps(g.band, g.eps);
    switch (g.regime) {
        case Regime::Delocalized:
            a.dS = 2.0 * int_re_phi(p, g, 0.0, g.z_l, tol);
            break;
        case Regime::Localized: {
            const double y = g.y_r;
            const double zh = g.has_zh ? g.z_h : 0.0;
            a.dS = int_re_phi(p, g, y, g.z_l, tol) - (0.5 * kPi * (y - zh) - int_re_phi(p, g, zh, y, tol)) +
                   0.5 * kPi * y;
            if (g.has_zh) a.dQ = 2.0 * int_decay(p, 4, e, 0.0, g.z_h, tol);
            break;
        }
        case Regime::Critical: {
            const double y = g.y_r;
            a.dS = int_re_phi(p, g, y, g.z_l, tol) - (0.5 * kPi * y - int_re_phi(p, g, 0.0, y, tol)) + 0.5 * kPi * y;
            if (g.has_zh) a.dQ = 2.0 * int_decay(p, 4, e, 0.0, g.z_h, tol);
            break;
        }
        default: break;
    }
    return a;
}

double action_S(const ModelParams& p, int band, double eps, const Options& o) {
    return actions(p, turning_points(p, band, eps, o), o).dS;
}

double action_Q(const ModelParams& p, int band, double eps, const Options& o) {
    return actions(p, turning_points(p, band, eps, o), o).dQ;
}

double half_action(const ModelParams& p, int band, double eps, const Options& o) {
    if (band != 1 && band != 4) throw std::domain_error("half_action: bands 1 and 4 only");
    const auto g = turning_points(p, band, eps, o);
    const double zh = g.has_zh ? g.z_h : 0.0;
    BandGeometry g4 = g;
    g4.band = 4;
    g4.eps = base_eps(band, eps);
    return 0.5 * kPi * zh + int_re_phi(p, g4, zh, g.z_l, o.quad_tol);
}

namespace {

double residual_for(const ModelParams& p, const BandGeometry& geo, Regime regime, int branch, const Options& o) {
    const double h = p.h();
    BandGeometry g = geo;
    g.regime = regime;
    const auto act = actions(p, g, o);
    switch (regime) {
        case Regime::Delocalized:
            return wrap_pi(act.dS / h - 0.5 * kPi);
        case Regime::Localized: {
            const double c = g.band == 1 ? o.band1_tunnel_coeff : o.band4_tunnel_coeff;
            return wrap_pi(act.dS / h - branch * c * std::exp(-act.dQ / h));
        }
        case Regime::Critical: {
            if (!has_critical_rule(p)) throw std::domain_error("critical rule needs J/g' < 1/2");
            const double gp = p.gprime(), J = p.J;
            const double mu = std::sqrt(gp / (2.0 * J) - 1.0);
            const double lambda = p.N * (g.eps - critical_energy(p, g.band == 1 ? 1 : 4));
            const double chi = lambda / (2.0 * mu * J);
            using cd = std::complex<double>;
            const cd I(0.0, 1.0);
            double s_reg;
            cd lg;
            double tail;
            if (g.band == 1) {
                s_reg = act.dS / h - log_abs_term(chi) + 0.5 * chi;
                lg = complex_log_gamma(cd(0.5, chi));
                tail = std::exp(-0.5 * kPi * chi);
            } else {
                s_reg = act.dS / h + log_abs_term(chi) - 0.5 * chi;
                lg = complex_log_gamma(cd(0.5, -chi));
                tail = std::exp(0.5 * kPi * chi);
            }
            const cd A = std::exp(-2.0 * I * s_reg + 0.5 * std::log(2.0 * kPi) - lg) - tail;
            return wrap_pi(std::arg(A) - 0.5 * kPi);
        }
        case Regime::Middle: {
            const double shift = 0.5 * kPi * g.y_r * (o.middle_yr_over_h ? 1.0 / h : 1.0);
            return wrap_pi(g.band == 3 ? act.dS / h - shift : act.dS / h + shift);
        }
    }
    return kNaN;
}

}  // namespace

double signed_residual(const ModelParams& p, int band, Regime regime, double eps, int branch, const Options& o) {
    const auto g = turning_points(p, band, eps, o);
    if ((regime == Regime::Middle) != (g.regime == Regime::Middle))
        throw std::domain_error("signed_residual: regime does not belong to this band");
    return residual_for(p, g, regime, branch, o);
}

double quantization_residual(const ModelParams& p, int band, Regime regime, double eps, const Options& o) {
    if (regime == Regime::Localized)
        return std::min(std::abs(signed_residual(p, band, regime, eps, +1, o)),
                        std::abs(signed_residual(p, band, regime, eps, -1, o)));
    return std::abs(signed_residual(p, band, regime, eps, +1, o));
}

DefectRecord defect(const ModelParams& p, double eps, const Options& o) {
    DefectRecord d;
    d.eps = eps;
    d.band = band_of(p, eps);
    const auto g = turning_points(p, d.band, eps, o);
    d.regime = g.regime;
    d.critical = kNaN;
    if (g.regime == Regime::Middle) {
        d.standard = quantization_residual(p, d.band, Regime::Middle, eps, o);
        d.matched = d.standard;
        return d;
    }
    Regime side = g.regime;
    if (side == Regime::Critical) {
        const double e4 = base_eps(d.band, eps);
        side = e4 < critical_energy(p, 4) ? Regime::Delocalized : Regime::Localized;
        d.critical = quantization_residual(p, d.band, Regime::Critical, eps, o);
    }
    d.standard = quantization_residual(p, d.band, side, eps, o);
    d.matched = g.regime == Regime::Critical ? d.critical : d.standard;
    return d;
}

std::vector<Level> solve_levels(const ModelParams& p, int band, Regime regime, const Options& o) {
    check_band(band);
    const auto env = band_envelope(p, band);
    double lo = env[0], hi = env[1];
    if (band == 2 || band == 3) {
        if (regime != Regime::Middle) throw std::domain_error("solve_levels: middle bands only have the middle regime");
        const double e = std::sqrt(2.0) * p.gprime();
        lo = std::max(lo, -e);
        hi = std::min(hi, e);
    } else {
        if (regime == Regime::Middle) throw std::domain_error("solve_levels: regime mismatch");
        const double w = has_critical_rule(p) ? critical_halfwidth(p, o) : 0.0;
        double e4lo = band_envelope(p, 4)[0], e4hi = band_envelope(p, 4)[1];
        const double ec = critical_energy(p, 4);
        double a = e4lo, b = e4hi;
        if (regime == Regime::Delocalized) b = std::min(e4hi, ec - w);
        else if (regime == Regime::Critical) {
            if (!has_critical_rule(p)) return {};
            a = ec - w;
            b = ec + w;
        } else a = std::max(e4lo, ec + w);
        if (band == 1) { lo = -b; hi = -a; }
        else { lo = a; hi = b; }
    }
    if (!(hi > lo)) return {};

    // shrink a hair so the envelope points themselves are never evaluated
    const double pad = 1e-12 * (hi - lo);
    lo += pad;
    hi -= pad;

    auto raw = [&](double e, int br) { return signed_residual(p, band, regime, e, br, o); };

    // rough count from the unwrapped functional at the ends
    const auto count_hint = [&]() {
        try {
            const double s0 = actions(p, [&] { auto g = turning_points(p, band, lo, o); g.regime = regime; return g; }(), o).dS;
            const double s1 = actions(p, [&] { auto g = turning_points(p, band, hi, o); g.regime = regime; return g; }(), o).dS;
            return std::abs(s1 - s0) / p.h() / kPi;
        } catch (const std::exception&) {
            return double(p.N);
        }
    }();
    const int M = std::max(200, int(40.0 * (count_hint + 2.0)));

    std::vector<Level> out;
    const std::vector<int> branches = regime == Regime::Localized ? std::vector<int>{+1, -1} : std::vector<int>{+1};
    for (int br : branches) {
        double e0 = lo, s0 = raw(e0, br);
        for (int k = 1; k <= M; ++k) {
            const double e1 = lo + (hi - lo) * k / M;
            const double s1 = raw(e1, br);
            const bool change = (s0 <= 0.0 && s1 > 0.0) || (s0 >= 0.0 && s1 < 0.0);
            if (change && std::abs(s1 - s0) < 0.5 * kPi) {
                const double root = bisect([&](double e) { return raw(e, br); }, e0, e1);
                if (!std::isnan(root)) out.push_back({root, 0, br});
            }
            e0 = e1;
            s0 = s1;
        }
    }
    std::sort(out.begin(), out.end(), [](const Level& a, const Level& b) { return a.eps < b.eps; });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].n = long(k);
    return out;
}

double predicted_splitting(const ModelParams& p, double eps, const Options& o) {
    const int band = band_of(p, eps);
    if (band != 1 && band != 4) throw std::domain_error("predicted_splitting: eps not in band 1 or 4");
    const auto g = turning_points(p, band, eps, o);
    if (!g.has_zh) throw std::domain_error("predicted_splitting: eps not in the localized regime");
    const auto env = band_envelope(p, band);
    const double step = 1e-6 * (env[1] - env[0]);
    auto F = [&](double e) {
        auto gg = turning_points(p, band, e, o);
        gg.regime = Regime::Localized;
        return actions(p, gg, o).dS / p.h();
    };
    double lo = eps - step, hi = eps + step;
    lo = std::max(lo, env[0]);
    hi = std::min(hi, env[1]);
    const double dF = (F(hi) - F(lo)) / (hi - lo);
    BandGeometry gl = g;
    gl.regime = Regime::Localized;
    const double dQ = actions(p, gl, o).dQ;
    return 0.5 * std::exp(-dQ / p.h()) / std::abs(dF);
}

double velocity(const ModelParams& p, int band, double eps, double x) {
    const double d = eps - W(p, band, x);
    const double q = p.J * p.J * (1.0 - x * x) - d * d;
    return 2.0 * std::sqrt(std::max(0.0, q));
}

ClassicalOrbit classical_orbit(const ModelParams& p, int band, double x0) {
    check_band(band);
    if (!(std::abs(x0) <= 1.0)) throw std::domain_error("classical_orbit: x0 outside [-1, 1]");
    ClassicalOrbit orb;
    orb.eps = potential(p, band, Edge::Low, x0);
    auto q = [&](double x) {
        const double d = orb.eps - W(p, band, x);
        return p.J * p.J * (1.0 - x * x) - d * d;
    };
    const double delta = 1e-7;
    const bool right = x0 + delta <= 1.0 && q(x0 + delta) > 0.0;
    const bool left = x0 - delta >= -1.0 && q(x0 - delta) > 0.0;
    if (right == left) throw std::domain_error("classical_orbit: degenerate orbit at x0");
    const double dir = right ? 1.0 : -1.0;

    double prev = x0 + dir * delta, other = dir > 0 ? 1.0 : -1.0;
    for (double x = prev; dir > 0 ? x <= 1.0 : x >= -1.0; x += dir * 1e-3) {
        if (q(x) < 0.0) { other = bisect(q, std::min(prev, x), std::max(prev, x)); break; }
        prev = x;
    }
    if (std::abs(other) >= 1.0 && q(other) > 0.0) other = dir;  // orbit reaches the hard wall
    orb.a = std::min(x0, other);
    orb.b = std::max(x0, other);

    auto inv_v = [&](double x) {
        const double v = velocity(p, band, orb.eps, x);
        return v > 0.0 ? 1.0 / v : 0.0;
    };
    const double half_T = integrate_cos_substituted(inv_v, orb.a, orb.b, 1e-11);
    const double mx = integrate_cos_substituted([&](double x) { return x * inv_v(x); }, orb.a, orb.b, 1e-11);
    orb.period = 2.0 * half_T;
    orb.mean_x = mx / half_T;
    return orb;
}

double phase_boundary(double x0) {
    if (!(x0 > 0.0 && x0 <= 1.0)) throw std::domain_error("phase_boundary: need 0 < x0 <= 1");
    // ((1 - sqrt(1-x^2)) / (2x^2))^(-1/2) without the cancellation
    return std::sqrt(2.0 * (1.0 + std::sqrt(1.0 - x0 * x0)));
}

double phase_boundary_g_over_J(double x0, int N) {
    if (!(x0 > 0.0 && x0 <= 1.0)) throw std::domain_error("phase_boundary: need 0 < x0 <= 1");
    return std::sqrt(4.0 * N * (1.0 + std::sqrt(1.0 - x0 * x0)));
}

double barrier_position(double r) {
    if (!(r >= 0.5 - 1e-15 && r <= 1.0 / std::sqrt(2.0) + 1e-15))
        throw std::domain_error("barrier_position: need 1/2 <= J/g' <= 1/sqrt(2)");
    const double r2 = r * r;
    return std::min(1.0, std::sqrt(std::max(0.0, (4.0 * r2 - 1.0) / (4.0 * r2 * r2))));
}

double localization_edge(double r) {
    if (r <= 0.5) return 0.0;
    if (r >= 1.0 / std::sqrt(2.0)) return 1.0;
    return barrier_position(r);
}

Matrix4 first_order_coupling(double J, double x) {
    if (!(std::abs(x) < 1.0)) throw std::domain_error("first_order_coupling: need |x| < 1");
    const double pre = J / (2.0 * std::sqrt(1.0 - x * x));
    const double a = pre * (x + 1.0) / 2.0, b = pre * (1.0 - x) / 2.0;
    return {{{0, a, b, 0}, {a, 0, 0, b}, {b, 0, 0, a}, {0, b, a, 0}}};
}

double first_order_correction(const ModelParams& p, int band, double eps, double x) {
    check_band(band);
    const auto B1 = first_order_coupling(p.J, x);
    const double ri = momentum_ratio(p, band, eps, x);
    const double sin2 = std::sqrt(std::abs(1.0 - ri * ri));
    if (sin2 < 1e-8) throw std::domain_error("first_order_correction: too close to a turning point");
    // cos(2 phi_j) = r_j for allowed and forbidden modes alike
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) sum += std::abs(B1[band - 1][j]) * std::abs(momentum_ratio(p, j + 1, eps, x));
    return p.h() * sum / (p.J * std::sqrt(1.0 - x * x) * sin2);
}

std::vector<double> wkb_wavefunction(const ModelParams& p, int band, double eps, const std::vector<double>& xs,
                                     int parity, const Options& o) {
    if (band != 1 && band != 4) throw std::domain_error("wkb_wavefunction: bands 1 and 4 only");
    auto g = turning_points(p, band, eps, o);
    const double e = base_eps(band, eps);
    g.band = 4;
    g.eps = e;
    const double h = p.h();
    const double layer = std::pow(h, 2.0 / 3.0);
    const bool localized = g.has_zh && e > critical_energy(p, 4);
    const double tol = 1e-10;

    auto amp = [&](double x, double lo, double hi) {
        // 1/sqrt|v| frozen inside the turning-point boundary layers
        double xc = x;
        if (hi - lo > 2.0 * layer) xc = std::clamp(x, lo + layer, hi - layer);
        else xc = 0.5 * (lo + hi);
        const double d = e - W(p, 4, xc);
        const double q = std::abs(p.J * p.J * (1.0 - xc * xc) - d * d);
        return q > 0 ? 1.0 / std::sqrt(2.0 * std::sqrt(q)) : 0.0;
    };
    auto amp_out = [&](double x, double z, double sgn) {
        const double xc = sgn > 0 ? std::max(x, z + layer) : std::min(x, z - layer);
        const double xcl = std::clamp(xc, -1.0 + 1e-12, 1.0 - 1e-12);
        const double d = e - W(p, 4, xcl);
        const double q = std::abs(p.J * p.J * (1.0 - xcl * xcl) - d * d);
        return q > 0 ? 1.0 / std::sqrt(2.0 * std::sqrt(q)) : 0.0;
    };
    auto phi = [&](double x) { return momentum_real(p, 4, e, x); };

    std::vector<double> psi(xs.size(), 0.0);
    if (!localized) {
        const double zl = g.z_l;
        const double total = integrate_endpoint_singular(phi, -zl, zl, tol) / h;
        const double right_sign = std::cos(total - 0.25 * kPi) >= 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double x = xs[k];
            if (std::abs(x) <= zl) {
                const double ph = integrate_endpoint_singular(phi, -zl, x, tol) / h;
                psi[k] = amp(x, -zl, zl) * std::cos(ph - 0.25 * kPi);
            } else {
                const double s = x > 0 ? 1.0 : -1.0;
                const double Q = int_decay(p, 4, e, zl, std::abs(x), tol) / h;
                psi[k] = 0.5 * amp_out(std::abs(x), zl, 1.0) * std::exp(-Q) * (s > 0 ? right_sign : 1.0);
            }
        }
    } else {
        const double zl = g.z_l, zh = g.z_h;
        const double inner = integrate_endpoint_singular(phi, zh, zl, tol) / h;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double x = xs[k];
            const double ax = std::abs(x);
            double v;
            if (ax >= zh && ax <= zl) {
                const double ph = integrate_endpoint_singular(phi, ax, zl, tol) / h;
                v = amp(ax, zh, zl) * std::cos(ph - 0.25 * kPi);
            } else if (ax > zl) {
                const double Q = int_decay(p, 4, e, zl, ax, tol) / h;
                v = 0.5 * amp_out(ax, zl, 1.0) * std::exp(-Q);
            } else {
                const double Q = int_decay(p, 4, e, ax, zh, tol) / h;
                const double fast = inner + 0.5 * kPi * (zh - ax) / h - 0.25 * kPi;
                v = 0.5 * amp_out(ax, zh, -1.0) * std::exp(-Q) * std::cos(fast);
            }
            psi[k] = x < 0 ? parity * v : v;
        }
    }
    double norm = 0.0;
    for (double v : psi) norm += v * v;
    if (norm > 0) for (double& v : psi) v /= std::sqrt(norm);
    return psi;
}

}  // namespace jcdm::wkb
