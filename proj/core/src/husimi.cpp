#include "jcdm/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <string>

namespace jcdm::husimi {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

void check_grid(int nx, int ntheta) {
    if (nx < 3 || ntheta < 3) throw config_error("husimi: grid needs at least 3 x 3 points");
}

}  // namespace

double kappa0(const ModelParams& p) {
    p.validate();
    const double N = p.N;
    return std::pow(N * N * N * p.g * p.g / (8.0 * p.J * p.J), 0.125);
}

double tuning(const ModelParams& p, double eps, double eps_ground) {
    const double top = -std::sqrt(2.0) * p.gprime();
    if (!(top > eps_ground)) return 1.0;
    return std::clamp(1.0 + (eps - eps_ground) / (top - eps_ground), 1.0, 2.0);
}

HusimiGrid husimi_q(const std::vector<double>& C4, int N, double kappa, int nx, int ntheta) {
    if (N < 1 || int(C4.size()) != N + 1) throw config_error("husimi_q: need N + 1 amplitudes");
    if (!(kappa > 0)) throw config_error("husimi_q: kappa must be positive");
    check_grid(nx, ntheta);
    HusimiGrid g;
    g.x = linspace(-1.0, 1.0, nx);
    g.theta = linspace(-kPi / 2, kPi / 2, ntheta);
    g.kappa = kappa;
    g.band4_weight = std::inner_product(C4.begin(), C4.end(), C4.begin(), 0.0);

    // Q = |G P|^2 with G(i,k) = C4(Z_k) exp(-kappa^2 (Z_k/N - x_i)^2 / 2), P(k,j) = exp(i Z_k theta_j)
    Eigen::MatrixXd G(nx, N + 1);
    Eigen::MatrixXcd P(N + 1, ntheta);
    for (int k = 0; k <= N; ++k) {
        const int Z = 2 * k - N;
        const double xp = double(Z) / N;
        for (int i = 0; i < nx; ++i) {
            const double d = xp - g.x[i];
            G(i, k) = C4[k] * std::exp(-0.5 * kappa * kappa * d * d);
        }
        for (int j = 0; j < ntheta; ++j) P(k, j) = std::polar(1.0, Z * g.theta[j]);
    }
    const Eigen::MatrixXcd A = G.cast<std::complex<double>>() * P;
    g.Q = A.cwiseAbs2();
    return g;
}

HusimiGrid husimi_q(const EigenSolution& sol, int n, double s, int nx, int ntheta) {
    if (n < 0 || n >= sol.size()) throw config_error("husimi_q: state index out of range");
    const Eigen::MatrixXd C = sol.band_components(n);
    const int N = sol.params.N;
    std::vector<double> c4(N + 1);
    for (int k = 0; k <= N; ++k) c4[k] = C(k, 3);
    const double w = std::inner_product(c4.begin(), c4.end(), c4.begin(), 0.0);
    if (w < 0.5)
        throw config_error("husimi_q: state " + std::to_string(n) + " is not lower-lower dominated (leakage " +
                           std::to_string(1.0 - w) + ")");
    if (s <= 0) s = tuning(sol.params, sol.eps[n], sol.eps[0]);
    return husimi_q(c4, N, s * kappa0(sol.params), nx, ntheta);
}

int nearest_band4_state(const EigenSolution& sol, double eps) {
    const double top = -std::sqrt(2.0) * sol.params.gprime();
    int best = -1;
    for (int n = 0; n < sol.size(); ++n) {
        if (sol.eps[n] >= top) break;
        if (best < 0 || std::abs(sol.eps[n] - eps) < std::abs(sol.eps[best] - eps)) best = n;
    }
    return best;
}

int count_components(const HusimiGrid& g, double frac) {
    const int nx = int(g.Q.rows()), nt = int(g.Q.cols());
    const double cut = frac * g.Q.maxCoeff();
    // union-find over cells above the cut; theta = +-pi/2 columns are the same points
    std::vector<int> parent(std::size_t(nx) * nt, -1);
    auto id = [&](int i, int j) { return i * nt + j; };
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) {
        if (parent[a] < 0 || parent[b] < 0) return;
        parent[find(a)] = find(b);
    };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nt; ++j)
            if (g.Q(i, j) >= cut) parent[id(i, j)] = id(i, j);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nt; ++j) {
            if (parent[id(i, j)] < 0) continue;
            if (i + 1 < nx) unite(id(i, j), id(i + 1, j));
            if (j + 1 < nt) unite(id(i, j), id(i, j + 1));
        }
    for (int i = 0; i < nx; ++i) unite(id(i, 0), id(i, nt - 1));
    int count = 0;
    for (int a = 0; a < nx * nt; ++a)
        if (parent[a] >= 0 && find(a) == a) ++count;
    return count;
}

bool ring_like(const HusimiGrid& g, double frac) {
    auto nearest = [](const std::vector<double>& v, double t) {
        return int(std::min_element(v.begin(), v.end(),
                                    [&](double a, double b) { return std::abs(a - t) < std::abs(b - t); }) -
                   v.begin());
    };
    return g.Q(nearest(g.x, 0.0), nearest(g.theta, 0.0)) < frac * g.Q.maxCoeff();
}

Moments moments(const HusimiGrid& g) {
    Moments m;
    const int nx = int(g.Q.rows()), nt = int(g.Q.cols());
    double tot = 0.0, sx = 0.0, st = 0.0, sxx = 0.0, stt = 0.0;
    // drop the duplicated theta column
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j + 1 < nt; ++j) {
            const double q = g.Q(i, j);
            tot += q;
            sx += q * g.x[i];
            st += q * g.theta[j];
            sxx += q * g.x[i] * g.x[i];
            stt += q * g.theta[j] * g.theta[j];
        }
    if (!(tot > 0)) throw numerical_error("moments: empty distribution");
    m.mean_x = sx / tot;
    m.mean_theta = st / tot;
    m.var_x = sxx / tot - m.mean_x * m.mean_x;
    m.var_theta = stt / tot - m.mean_theta * m.mean_theta;
    return m;
}

Widths harmonic_widths(const ModelParams& p) {
    p.validate();
    const double gp = p.gprime();
    const double a = 2.0 * p.J;              // theta^2
    const double b = 0.25 * gp + 0.5 * p.J;  // x^2
    const double h = p.h();
    return {std::sqrt(0.5 * h * std::sqrt(a / b)), std::sqrt(0.5 * h * std::sqrt(b / a))};
}

Widths smoothed_widths(const ModelParams& p, double kappa) {
    const Widths w = harmonic_widths(p);
    const double h = p.h();
    return {std::sqrt(w.sigma_x * w.sigma_x + 0.5 / (kappa * kappa)),
            std::sqrt(w.sigma_theta * w.sigma_theta + 0.5 * h * h * kappa * kappa)};
}

double H4(const ModelParams& p, double x, double theta) {
    const double gp = p.gprime();
    return -gp * (std::sqrt(std::max(0.0, 1.0 - x)) + std::sqrt(std::max(0.0, 1.0 + x))) -
           p.J * std::sqrt(std::max(0.0, 1.0 - x * x)) * std::cos(2.0 * theta);
}

std::vector<Contour> classical_contours(const ModelParams& p, const std::vector<double>& levels, int nx,
                                        int ntheta) {
    p.validate();
    check_grid(nx, ntheta);
    const auto xs = linspace(-1.0, 1.0, nx);
    const auto ts = linspace(-kPi / 2, kPi / 2, ntheta);
    Eigen::MatrixXd H(nx, ntheta);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ntheta; ++j) H(i, j) = H4(p, xs[i], ts[j]);
    const double hmin = H.minCoeff();

    // edges: horizontal (i,j)-(i+1,j) -> 2*(i*nt+j), vertical (i,j)-(i,j+1) -> 2*(i*nt+j)+1
    auto hedge = [&](int i, int j) { return 2L * (long(i) * ntheta + j); };
    auto vedge = [&](int i, int j) { return 2L * (long(i) * ntheta + j) + 1; };

    std::vector<Contour> out;
    for (double lv : levels) {
        Contour c;
        c.level = lv;
        const double scale = std::max(1.0, std::abs(lv));
        if (lv <= hmin + 1e-12 * scale) {
            // band minimum: the level set is a point
            Eigen::Index a, b;
            H.minCoeff(&a, &b);
            if (std::abs(lv - hmin) <= 1e-12 * scale) c.lines.push_back({{xs[a], ts[b]}});
            out.push_back(std::move(c));
            continue;
        }
        std::map<long, std::array<double, 2>> pt;
        std::map<long, std::vector<long>> adj;
        auto cross = [&](long e, double x0, double t0, double h0, double x1, double t1, double h1) {
            if (!pt.count(e)) {
                const double f = (lv - h0) / (h1 - h0);
                pt[e] = {x0 + f * (x1 - x0), t0 + f * (t1 - t0)};
            }
            return e;
        };
        for (int i = 0; i + 1 < nx; ++i)
            for (int j = 0; j + 1 < ntheta; ++j) {
                const double h00 = H(i, j), h10 = H(i + 1, j), h11 = H(i + 1, j + 1), h01 = H(i, j + 1);
                const bool b00 = h00 >= lv, b10 = h10 >= lv, b11 = h11 >= lv, b01 = h01 >= lv;
                std::vector<long> e;
                // walk the cell boundary: bottom, right, top, left
                if (b00 != b10) e.push_back(cross(hedge(i, j), xs[i], ts[j], h00, xs[i + 1], ts[j], h10));
                if (b10 != b11) e.push_back(cross(vedge(i + 1, j), xs[i + 1], ts[j], h10, xs[i + 1], ts[j + 1], h11));
                if (b11 != b01) e.push_back(cross(hedge(i, j + 1), xs[i + 1], ts[j + 1], h11, xs[i], ts[j + 1], h01));
                if (b01 != b00) e.push_back(cross(vedge(i, j), xs[i], ts[j + 1], h01, xs[i], ts[j], h00));
                if (e.size() == 2) {
                    adj[e[0]].push_back(e[1]);
                    adj[e[1]].push_back(e[0]);
                } else if (e.size() == 4) {
                    // saddle: pair by the cell-centre value
                    const bool centre = 0.25 * (h00 + h10 + h11 + h01) >= lv;
                    const int s = (centre == b00) ? 0 : 1;
                    for (int k = 0; k < 2; ++k) {
                        const long a = e[(s + 2 * k) % 4], b = e[(s + 2 * k + 1) % 4];
                        adj[a].push_back(b);
                        adj[b].push_back(a);
                    }
                }
            }
        // chain segments into polylines, open ends first
        std::map<long, bool> used;
        auto walk = [&](long start) {
            Polyline line{pt[start]};
            long prev = -1, cur = start;
            used[cur] = true;
            for (;;) {
                long next = -1;
                for (long n : adj[cur])
                    if (n != prev && !used[n]) {
                        next = n;
                        break;
                    }
                if (next < 0) {
                    // closed loop returns to start
                    for (long n : adj[cur])
                        if (n == start && prev != start && line.size() > 2) line.push_back(pt[start]);
                    break;
                }
                line.push_back(pt[next]);
                used[next] = true;
                prev = cur;
                cur = next;
            }
            return line;
        };
        for (const auto& [e, nb] : adj)
            if (nb.size() == 1 && !used[e]) c.lines.push_back(walk(e));
        for (const auto& [e, nb] : adj)
            if (!used[e]) c.lines.push_back(walk(e));
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace jcdm::husimi
