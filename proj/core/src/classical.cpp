#include "jcdm/classical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "jcdm/model.hpp"

namespace odeint = boost::numeric::odeint;

namespace jcdm::classical {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class State>
auto dense_stepper(double tol) {
    return odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
}

void check_finite(const Cart& y, const char* where) {
    for (double v : y)
        if (!std::isfinite(v)) throw config_error(std::string(where) + ": non-finite state");
}

}  // namespace

std::array<double, 8> eom_full(const ClassicalState& s, const Couplings& c) {
    std::array<double, 8> d{};
    const Site* site[2] = {&s.L, &s.R};
    for (int k = 0; k < 2; ++k) {
        const Site& a = *site[k];
        const Site& b = *site[1 - k];
        const double st = std::sin(a.theta), ct = std::cos(a.theta);
        const double sp = std::sin(a.phi), cp = std::cos(a.phi);
        if (std::abs(st) < 1e-10) throw numerical_error("eom_full: spin at a pole, use the Cartesian form");
        // phi sign fixed by dE/dt = 0 (see eom_cartesian)
        d[4 * k + 0] = 2 * c.g * (a.R * sp + a.I * cp);
        d[4 * k + 1] = 2 * c.g * (a.R * cp - a.I * sp) * ct / st;
        d[4 * k + 2] = -c.g * s.S * st * sp - c.J * b.I;
        d[4 * k + 3] = -c.g * s.S * st * cp + c.J * b.R;
    }
    return d;
}

Cart to_cartesian(const ClassicalState& s) {
    Cart y{};
    const Site* site[2] = {&s.L, &s.R};
    for (int k = 0; k < 2; ++k) {
        const Site& a = *site[k];
        y[3 * k + 0] = std::sin(a.theta) * std::cos(a.phi);
        y[3 * k + 1] = std::sin(a.theta) * std::sin(a.phi);
        y[3 * k + 2] = -std::cos(a.theta);
        y[6 + 2 * k] = a.R;
        y[7 + 2 * k] = a.I;
    }
    return y;
}

ClassicalState from_cartesian(const Cart& y, double S) {
    ClassicalState s;
    s.S = S;
    Site* site[2] = {&s.L, &s.R};
    for (int k = 0; k < 2; ++k) {
        const double nx = y[3 * k], ny = y[3 * k + 1], nz = y[3 * k + 2];
        site[k]->theta = std::atan2(std::hypot(nx, ny), -nz);
        site[k]->phi = std::atan2(ny, nx);
        site[k]->R = y[6 + 2 * k];
        site[k]->I = y[7 + 2 * k];
    }
    return s;
}

void eom_cartesian(const Cart& y, Cart& dy, const Couplings& c, double S) {
    for (int k = 0; k < 2; ++k) {
        const double nx = y[3 * k], ny = y[3 * k + 1], nz = y[3 * k + 2];
        const double R = y[6 + 2 * k], I = y[7 + 2 * k];
        const double Rb = y[6 + 2 * (1 - k)], Ib = y[7 + 2 * (1 - k)];
        // n' = B x n, B = (2gR, -2gI, 0)
        const double Bx = 2 * c.g * R, By = -2 * c.g * I;
        dy[3 * k + 0] = By * nz;
        dy[3 * k + 1] = -Bx * nz;
        dy[3 * k + 2] = Bx * ny - By * nx;
        dy[6 + 2 * k] = -c.g * S * ny - c.J * Ib;
        dy[7 + 2 * k] = -c.g * S * nx + c.J * Rb;
    }
}

double energy(const ClassicalState& s, const Couplings& c) {
    double e = 0.0;
    for (const Site* a : {&s.L, &s.R})
        e += 2 * c.g * s.S * std::sin(a->theta) * (a->R * std::cos(a->phi) - a->I * std::sin(a->phi));
    return e - 2 * c.J * (s.L.R * s.R.R + s.L.I * s.R.I);
}

double energy(const Cart& y, const Couplings& c, double S) {
    double e = 0.0;
    for (int k = 0; k < 2; ++k) e += 2 * c.g * S * (y[6 + 2 * k] * y[3 * k] - y[7 + 2 * k] * y[3 * k + 1]);
    return e - 2 * c.J * (y[6] * y[8] + y[7] * y[9]);
}

namespace {
double site_number(const Cart& y, double S, int k) {
    return y[6 + 2 * k] * y[6 + 2 * k] + y[7 + 2 * k] * y[7 + 2 * k] + S * (1.0 + y[3 * k + 2]);
}
}  // namespace

double polariton_number(const Cart& y, double S) { return site_number(y, S, 0) + site_number(y, S, 1); }

double imbalance(const Cart& y, double S) {
    const double a = site_number(y, S, 0), b = site_number(y, S, 1);
    return (a + b) > 0 ? (a - b) / (a + b) : 0.0;
}

Trajectory integrate(const Cart& y0, double S, const Couplings& c, double t0, double t_max, double tol,
                     double sample_dt) {
    check_finite(y0, "integrate");
    if (!(tol > 0)) throw config_error("integrate: tol must be positive");
    Trajectory tr;
    const double E0 = energy(y0, c, S);
    const double N0 = polariton_number(y0, S);
    const double scale = std::max(c.g * S * std::sqrt(std::max(N0, 0.0)) + c.J * N0, 1e-300);
    double dE = 0.0, dN = 0.0;
    auto obs = [&](const Cart& y, double t) {
        tr.t.push_back(t);
        tr.y.push_back(y);
        dE = std::max(dE, std::abs(energy(y, c, S) - E0));
        dN = std::max(dN, std::abs(polariton_number(y, S) - N0));
    };
    auto sys = [&](const Cart& y, Cart& dy, double) { eom_cartesian(y, dy, c, S); };
    Cart y = y0;
    const double span = t_max - t0;
    const double dir = span >= 0 ? 1.0 : -1.0;
    const double dt0 = dir * std::min(1e-3, std::abs(span) + 1e-12) / std::max(1.0, c.g + c.J);
    if (span == 0.0) {
        obs(y, t0);
    } else if (sample_dt > 0) {
        const long n = std::max<long>(1, std::lround(std::abs(span) / sample_dt));
        std::vector<double> times(n + 1);
        for (long i = 0; i <= n; ++i) times[i] = t0 + span * double(i) / double(n);
        tr.steps = odeint::integrate_times(dense_stepper<Cart>(tol), sys, y, times.begin(), times.end(), dt0, obs);
    } else {
        tr.steps = odeint::integrate_adaptive(dense_stepper<Cart>(tol), sys, y, t0, t_max, dt0, obs);
    }
    tr.energy_drift = dE / scale;
    tr.number_drift = N0 > 0 ? dN / N0 : dN;
    return tr;
}

Trajectory integrate(const ClassicalState& s0, const Couplings& c, double t_max, double tol, double sample_dt) {
    return integrate(to_cartesian(s0), s0.S, c, 0.0, t_max, tol, sample_dt);
}

ClassicalState fig7_initial_state(double theta_R0, int N, double S) {
    if (N < 1) throw config_error("fig7_initial_state: N must be >= 1");
    ClassicalState s;
    s.S = S;
    s.L = {0.0, 0.0, std::sqrt(double(N)), 0.0};
    s.R = {theta_R0, 0.0, 0.0, 0.0};
    return s;
}

AverageResult averaged_imbalance(const ClassicalState& s0, const Couplings& c, double t_transient, double t_avg,
                                 double tol) {
    if (!(t_avg > 0) || t_transient < 0) throw config_error("averaged_imbalance: bad window");
    using Aug = std::array<double, 11>;
    const double S = s0.S;
    auto sys = [&](const Aug& y, Aug& dy, double) {
        Cart yc, dc;
        std::copy_n(y.begin(), 10, yc.begin());
        eom_cartesian(yc, dc, c, S);
        std::copy_n(dc.begin(), 10, dy.begin());
        dy[10] = imbalance(yc, S);
    };
    Aug y{};
    const Cart y0 = to_cartesian(s0);
    std::copy_n(y0.begin(), 10, y.begin());
    const double dt0 = 1e-3 / std::max(1.0, c.g + c.J);
    auto st = dense_stepper<Aug>(tol);
    if (t_transient > 0) odeint::integrate_adaptive(st, sys, y, 0.0, t_transient, dt0);
    y[10] = 0.0;
    const double tm = t_transient + 0.5 * t_avg;
    odeint::integrate_adaptive(dense_stepper<Aug>(tol), sys, y, t_transient, tm, dt0);
    const double first = y[10];
    odeint::integrate_adaptive(dense_stepper<Aug>(tol), sys, y, tm, t_transient + t_avg, dt0);
    AverageResult r;
    r.average = y[10] / t_avg;
    r.first_half = first / (0.5 * t_avg);
    r.converged = std::abs(r.first_half - r.average) <= 0.05;
    for (double v : y)
        if (!std::isfinite(v)) throw numerical_error("averaged_imbalance: integration diverged");
    return r;
}

namespace {

template <class F>
void parallel_for(long n, int threads, F&& f) {
    threads = std::max(1, std::min<int>(threads, int(n)));
    if (threads == 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (long i; (i = next.fetch_add(1)) < n;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

double average_at(double theta_R0, double eta, int N, double J, const ScanOptions& o, bool* conv = nullptr) {
    const Couplings c{eta * 2.0 * J * std::sqrt(double(N)), J};
    const auto r = averaged_imbalance(fig7_initial_state(theta_R0, N, o.S), c, o.t_transient_J / J, o.t_avg_J / J,
                                      o.tol);
    if (conv) *conv = r.converged;
    return r.average;
}

}  // namespace

ScanResult threshold_scan(const std::vector<double>& theta_R0, const std::vector<double>& coupling, int N, double J,
                          const ScanOptions& o) {
    if (N < 1 || !(J > 0)) throw config_error("threshold_scan: need N >= 1 and J > 0");
    if (theta_R0.empty() || coupling.empty()) throw config_error("threshold_scan: empty grid");
    if (!std::is_sorted(coupling.begin(), coupling.end()))
        throw config_error("threshold_scan: coupling grid must be ascending");
    ScanResult res;
    res.theta_R0 = theta_R0;
    res.coupling = coupling;
    const long nt = long(theta_R0.size()), nc = long(coupling.size());
    res.average.assign(nt, std::vector<double>(nc, 0.0));
    std::vector<std::vector<char>> conv(nt, std::vector<char>(nc, 1));
    parallel_for(nt * nc, o.threads, [&](long idx) {
        const long i = idx / nc, j = idx % nc;
        bool ok = true;
        res.average[i][j] = average_at(theta_R0[i], coupling[j], N, J, o, &ok);
        conv[i][j] = ok;
    });
    res.converged.assign(nt, std::vector<bool>(nc));
    res.threshold.assign(nt, std::numeric_limits<double>::quiet_NaN());
    for (long i = 0; i < nt; ++i) {
        for (long j = 0; j < nc; ++j) res.converged[i][j] = conv[i][j];
        const auto& a = res.average[i];
        for (long j = 1; j < nc; ++j) {
            if (a[j - 1] < o.threshold && a[j] >= o.threshold) {
                const double f = (o.threshold - a[j - 1]) / (a[j] - a[j - 1]);
                res.threshold[i] = coupling[j - 1] + f * (coupling[j] - coupling[j - 1]);
                break;
            }
        }
    }
    return res;
}

double refine_threshold(double theta_R0, double lo, double hi, int N, double J, const ScanOptions& o, double tol) {
    if (!(lo < hi)) throw config_error("refine_threshold: need lo < hi");
    double flo = average_at(theta_R0, lo, N, J, o) - o.threshold;
    double fhi = average_at(theta_R0, hi, N, J, o) - o.threshold;
    if (flo >= 0 || fhi < 0) throw numerical_error("refine_threshold: threshold not bracketed");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (average_at(theta_R0, mid, N, J, o) - o.threshold < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double pendulum_critical(double theta_R0) {
    if (!(theta_R0 > 0 && theta_R0 < kPi)) throw config_error("pendulum_critical: need 0 < theta_R0 < pi");
    if (theta_R0 >= kPi / 2) return 1.0 / std::sin(theta_R0);
    auto f = [&](double t0) { return std::sin(t0) + (std::cos(t0) - std::cos(theta_R0)) / (t0 - theta_R0); };
    // theta0 = theta_R0 is a removable zero; the physical root lies in (theta_R0, pi)
    const int M = 2000;
    const double a = theta_R0 + 1e-3 * (kPi - theta_R0), b = kPi - 1e-9;
    double x0 = a, f0 = f(a);
    for (int i = 1; i <= M; ++i) {
        const double x1 = a + (b - a) * i / M, f1 = f(x1);
        if ((f0 > 0) != (f1 > 0)) {
            boost::math::tools::eps_tolerance<double> et(50);
            std::uintmax_t it = 200;
            const auto r = boost::math::tools::bisect(f, x0, x1, et, it);
            return 1.0 / std::sin(0.5 * (r.first + r.second));
        }
        x0 = x1;
        f0 = f1;
    }
    throw numerical_error("pendulum_critical: no bracketing root");
}

State4 eom_restricted(const State4& s, const Couplings& c, double S) {
    return {2 * c.g * s[2], 2 * c.g * s[3], -c.g * S * std::sin(s[0]) - c.J * s[3],
            -c.g * S * std::sin(s[1]) + c.J * s[2]};
}

ClassicalState embed_restricted(const State4& s, double S) {
    ClassicalState out;
    out.S = S;
    out.L = {s[0], kPi / 2, s[2], 0.0};
    out.R = {s[1], 0.0, 0.0, s[3]};
    return out;
}

double restricted_invariant(const State4& s, double S) {
    return s[2] * s[2] + s[3] * s[3] - S * (std::cos(s[0]) + std::cos(s[1]));
}

PoincareResult poincare_section(const State4& s0, const Couplings& c, int N, int n_crossings, double section,
                                double t_max, double S, double tol) {
    if (N < 1 || n_crossings < 1) throw config_error("poincare_section: need N >= 1 and n_crossings >= 1");
    if (!(c.g > 0)) throw config_error("poincare_section: g must be positive (theta_L is frozen otherwise)");
    for (double v : s0)
        if (!std::isfinite(v)) throw config_error("poincare_section: non-finite state");
    auto sys = [&](const State4& y, State4& dy, double) { dy = eom_restricted(y, c, S); };
    // Henon: theta_L as independent variable
    auto henon = [&](const State4& y, State4& dy, double) {
        const State4 f = eom_restricted(y, c, S);
        for (int k = 0; k < 4; ++k) dy[k] = f[k] / f[0];
    };
    PoincareResult res;
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State4>());
    State4 y = s0;
    double t = 0.0;
    double dt = 1e-3 / std::max(1.0, c.g + c.J);
    const double twopi = 2 * kPi;
    auto branch = [&](double th) { return std::floor((th - section) / twopi); };
    long crossing = 0;
    while (int(res.points.size()) < n_crossings && t < t_max) {
        const State4 prev = y;
        if (stepper.try_step(sys, y, t, dt) != odeint::success) {
            if (dt < 1e-14) throw numerical_error("poincare_section: step size underflow");
            continue;
        }
        const double b0 = branch(prev[0]), b1 = branch(y[0]);
        if (b1 > b0) {
            // crossed upwards; refine from prev in the section variable
            State4 z = prev;
            const double target = section + twopi * b1;
            if (std::abs(eom_restricted(z, c, S)[0]) < 1e-300)
                throw numerical_error("poincare_section: degenerate crossing");
            odeint::integrate_adaptive(odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State4>()),
                                       henon, z, z[0], target, (target - z[0]) / 4);
            SectionPoint p;
            p.crossing = crossing++;
            p.R_L = z[2];
            p.I_R = z[3];
            p.r = std::sqrt((z[2] * z[2] + z[3] * z[3]) / double(N));
            p.alpha = std::atan2(z[3], z[2]);
            p.theta_L = z[0];
            res.points.push_back(p);
        }
    }
    res.t_end = t;
    res.complete = int(res.points.size()) >= n_crossings;
    return res;
}

double section_fill(const PoincareResult& res, int m) {
    if (m < 1) throw config_error("section_fill: m must be >= 1");
    if (res.points.empty()) return 0.0;
    double x0 = res.points[0].R_L, x1 = x0, y0 = res.points[0].I_R, y1 = y0;
    for (const auto& p : res.points) {
        x0 = std::min(x0, p.R_L);
        x1 = std::max(x1, p.R_L);
        y0 = std::min(y0, p.I_R);
        y1 = std::max(y1, p.I_R);
    }
    const double ex = x1 - x0 + 1e-12, ey = y1 - y0 + 1e-12;
    std::vector<char> occ(std::size_t(m) * m, 0);
    for (const auto& p : res.points) {
        const int i = std::clamp(int((p.R_L - x0) / ex * m), 0, m - 1);
        const int j = std::clamp(int((p.I_R - y0) / ey * m), 0, m - 1);
        occ[std::size_t(i) * m + j] = 1;
    }
    return double(std::count(occ.begin(), occ.end(), 1)) / double(m * m);
}

}  // namespace jcdm::classical
