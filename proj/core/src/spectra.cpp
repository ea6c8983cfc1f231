#include "jcdm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <lapacke.h>

#include "jcdm/wkb.hpp"

namespace jcdm {

std::vector<double> EigenSolution::profile(int n) const {
    const int N = params.N;
    std::vector<double> out(N + 1, 0.0);
    for (int i = 0; i < basis.size(); ++i) {
        const double c = vectors(i, n);
        out[(basis[i].Z + N) / 2] += c * c;
    }
    return out;
}

Eigen::MatrixXd EigenSolution::band_components(int n) const {
    const int N = params.N;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N + 1, 4);
    // site polaritons (|n,down> +- |n-1,up>)/sqrt2, upper first
    static constexpr int sign[4][4] = {
        {+1, +1, +1, +1},  // upper-upper
        {+1, -1, +1, -1},  // upper-lower
        {+1, +1, -1, -1},  // lower-upper
        {+1, -1, -1, +1},  // lower-lower
    };
    for (int i = 0; i < basis.size(); ++i) {
        const auto& s = basis[i];
        const int k = (s.Z + N) / 2;
        const int m = 2 * s.mL + s.mR;
        for (int b = 0; b < 4; ++b) C(k, b) += 0.5 * sign[b][m] * vectors(i, n);
    }
    return C;
}

double EigenSolution::mean_x(int n) const {
    const auto prof = profile(n);
    const int N = params.N;
    double m = 0.0;
    for (int k = 0; k <= N; ++k) m += double(2 * k - N) / N * prof[k];
    return m;
}

EigenSolution diagonalize(const BandedHamiltonian& H, const ModelParams& p, const FockBasis& basis) {
    const int n = H.dim();
    if (n != basis.size()) throw config_error("diagonalize: basis/Hamiltonian dimension mismatch");
    const int kd = H.kd();
    std::vector<double> ab = H.storage();
    std::vector<double> w(n);
    Eigen::MatrixXd Zm(n, n);
    // Eigen is column-major, matching LAPACK_COL_MAJOR
    const lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'V', 'L', n, kd, ab.data(), kd + 1, w.data(),
                                           Zm.data(), n);
    if (info > 0) throw numerical_error("diagonalize: dsbevd failed to converge, index " + std::to_string(info));
    if (info < 0) throw numerical_error("diagonalize: dsbevd illegal argument " + std::to_string(-info));

    EigenSolution sol;
    sol.params = p;
    sol.basis = basis;
    Eigen::VectorXd E = Eigen::Map<Eigen::VectorXd>(w.data(), n);
    std::vector<int> par(n, 0);

    if (p.eps_imb == 0.0) {
        // rotate (near-)degenerate clusters onto parity eigenvectors
        const auto perm = parity_permutation(basis);
        const double tol = 1e-9 * std::max(1.0, H.max_abs());
        auto applyP = [&](const Eigen::VectorXd& v) {
            Eigen::VectorXd out(n);
            for (int i = 0; i < n; ++i) out[perm[i]] = v[i];
            return out;
        };
        int start = 0;
        while (start < n) {
            int end = start + 1;
            while (end < n && E[end] - E[end - 1] < tol) ++end;
            const int m = end - start;
            if (m > 1) {
                Eigen::MatrixXd V = Zm.middleCols(start, m);
                Eigen::MatrixXd PV(n, m);
                for (int c = 0; c < m; ++c) PV.col(c) = applyP(V.col(c));
                Eigen::MatrixXd M = V.transpose() * PV;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
                Zm.middleCols(start, m) = V * es.eigenvectors();
            }
            for (int c = start; c < end; ++c) {
                Eigen::VectorXd v = Zm.col(c);
                const double pv = v.dot(applyP(v));
                par[c] = pv >= 0 ? 1 : -1;
                if (m > 1) {
                    // Rayleigh quotient of the rotated vector
                    double r = 0.0;
                    for (int j = 0; j < n; ++j)
                        for (int i = std::max(0, j - kd); i <= std::min(n - 1, j + kd); ++i) r += v[i] * H.at(i, j) * v[j];
                    E[c] = r;
                }
            }
            start = end;
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (E[a] != E[b]) return E[a] < E[b];
        return par[a] > par[b];
    });
    sol.eps.resize(n);
    sol.vectors.resize(n, n);
    sol.parity.resize(n);
    for (int k = 0; k < n; ++k) {
        sol.eps[k] = E[order[k]] / p.N;
        Eigen::VectorXd v = Zm.col(order[k]);
        // fix the sign convention: largest component positive
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0) v = -v;
        sol.vectors.col(k) = v;
        sol.parity[k] = par[order[k]];
    }
    return sol;
}

EigenSolution diagonalize(const ModelParams& p) {
    const auto basis = enumerate_basis(p.N);
    return diagonalize(assemble_hamiltonian(p, basis), p, basis);
}

double max_eigen_residual(const BandedHamiltonian& H, const EigenSolution& sol) {
    const int n = H.dim(), kd = H.kd();
    double worst = 0.0;
    for (int c = 0; c < sol.size(); ++c) {
        const double E = sol.eps[c] * sol.params.N;
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double hv = 0.0;
            for (int j = std::max(0, i - kd); j <= std::min(n - 1, i + kd); ++j) hv += H.at(i, j) * sol.vectors(j, c);
            const double d = hv - E * sol.vectors(i, c);
            r2 += d * d;
        }
        worst = std::max(worst, std::sqrt(r2));
    }
    return worst;
}

std::vector<SpectralMapRow> spectral_map(const EigenSolution& sol) {
    std::vector<SpectralMapRow> rows;
    const int N = sol.params.N;
    rows.reserve(std::size_t(sol.size()) * (N + 1));
    for (int n = 0; n < sol.size(); ++n) {
        const auto prof = sol.profile(n);
        for (int k = 0; k <= N; ++k) rows.push_back({n, double(2 * k - N) / N, sol.eps[n], prof[k]});
    }
    return rows;
}

double DosHistogram::mean_count() const {
    if (counts.empty()) return 0.0;
    return double(std::accumulate(counts.begin(), counts.end(), 0)) / counts.size();
}

DosHistogram dos(const EigenSolution& sol, int nbins) {
    if (nbins < 10) throw config_error("dos: nbins must be >= 10");
    DosHistogram h;
    const double lo = sol.eps.minCoeff(), hi = sol.eps.maxCoeff();
    h.edges.resize(nbins + 1);
    for (int k = 0; k <= nbins; ++k) h.edges[k] = lo + (hi - lo) * k / nbins;
    h.counts.assign(nbins, 0);
    const double width = (hi - lo) / nbins;
    for (int n = 0; n < sol.size(); ++n) {
        int k = width > 0 ? int((sol.eps[n] - lo) / width) : 0;
        h.counts[std::clamp(k, 0, nbins - 1)]++;
    }
    return h;
}

SplittingResult splittings(const EigenSolution& sol, double eps_lo, double eps_hi, double pair_fraction) {
    SplittingResult res;
    std::vector<int> idx;
    for (int n = 0; n < sol.size(); ++n)
        if (sol.eps[n] >= eps_lo && sol.eps[n] <= eps_hi) idx.push_back(n);
    if (idx.size() < 2) {
        res.unpaired = idx;
        return res;
    }
    res.mean_spacing = (sol.eps[idx.back()] - sol.eps[idx.front()]) / double(idx.size() - 1);
    std::size_t k = 0;
    while (k < idx.size()) {
        if (k + 1 < idx.size()) {
            const int a = idx[k], b = idx[k + 1];
            const double gap = sol.eps[b] - sol.eps[a];
            const bool opposite = sol.parity[a] * sol.parity[b] < 0;
            if (opposite && gap < pair_fraction * res.mean_spacing) {
                res.pairs.push_back({a, 0.5 * (sol.eps[a] + sol.eps[b]), gap});
                k += 2;
                continue;
            }
        }
        res.unpaired.push_back(idx[k]);
        ++k;
    }
    return res;
}

ImbalanceMap imbalance_map(const EigenSolution& sol) {
    const auto& p = sol.params;
    if (!(p.eps_imb > 0.0)) throw config_error("imbalance_map: needs eps_imb > 0");
    ImbalanceMap map;
    const double r = p.J / p.gprime();
    map.x_m = wkb::localization_edge(r);
    auto V = [&](double x) { return wkb::potential(p, 1, wkb::Edge::Low, x); };
    auto root = [&](double e, double a, double b) {
        return wkb::turning_point_bisect(p, 1, wkb::Edge::Low, e, a, b);
    };
    const double edge = std::sqrt(2.0) * p.gprime();
    for (int n = 0; n < sol.size(); ++n) {
        const double e = sol.eps[n];
        if (e < edge) {
            map.skipped.push_back(n);
            continue;
        }
        double x0 = std::numeric_limits<double>::quiet_NaN();
        if (r > 0.5 && r < 1.0 / std::sqrt(2.0)) {
            // V_1^l rises to x_m then falls; prefer the outer branch
            x0 = root(e, map.x_m, 1.0);
            if (std::isnan(x0)) x0 = root(e, 0.0, map.x_m);
        } else {
            x0 = root(e, 0.0, 1.0);
        }
        if (std::isnan(x0) && std::abs(e - V(1.0)) < 1e-12) x0 = 1.0;
        if (std::isnan(x0)) {
            map.skipped.push_back(n);
            continue;
        }
        map.points.push_back({n, e, x0, sol.mean_x(n), x0 > map.x_m});
    }
    return map;
}

}  // namespace jcdm
