#include "jcdm/model.hpp"

#include <algorithm>
#include <cmath>

namespace jcdm {

double ModelParams::gprime() const { return g / std::sqrt(2.0 * N); }

void ModelParams::validate() const {
    if (N < 1) throw config_error("N must be >= 1");
    if (!(g >= 0.0) || !std::isfinite(g)) throw config_error("g must be finite and >= 0");
    if (!(J >= 0.0) || !std::isfinite(J)) throw config_error("J must be finite and >= 0");
    if (!std::isfinite(eps_imb)) throw config_error("eps_imb must be finite");
}

ModelParams ModelParams::from_J_over_gprime(int N, double J_over_gp, double gp) {
    ModelParams p;
    p.N = N;
    p.g = gp * std::sqrt(2.0 * N);
    p.J = J_over_gp * gp;
    return p;
}

ModelParams ModelParams::from_g_over_Jsqrt2N(int N, double ratio, double J) {
    ModelParams p;
    p.N = N;
    p.J = J;
    p.g = ratio * J * std::sqrt(2.0 * N);
    return p;
}

FockBasis::FockBasis(int N, std::vector<BasisState> states) : N_(N), states_(std::move(states)) {
    lookup_.assign(4 * (N + 1), -1);
    for (int i = 0; i < size(); ++i) {
        const auto& s = states_[i];
        lookup_[(s.Z + N) / 2 * 4 + 2 * s.mL + s.mR] = i;
    }
}

int FockBasis::index(int Z, Spin mL, Spin mR) const {
    if (Z < -N_ || Z > N_ || ((Z + N_) & 1)) return -1;
    return lookup_[(Z + N_) / 2 * 4 + 2 * mL + mR];
}

FockBasis enumerate_basis(int N) {
    if (N < 1) throw config_error("enumerate_basis: N must be >= 1");
    std::vector<BasisState> out;
    out.reserve(4 * N);
    for (int Z = -N; Z <= N; Z += 2) {
        for (int mL = 0; mL < 2; ++mL) {
            for (int mR = 0; mR < 2; ++mR) {
                BasisState s{Z, Spin(mL), Spin(mR)};
                if (s.photons_L(N) >= 0 && s.photons_R(N) >= 0) out.push_back(s);
            }
        }
    }
    return FockBasis(N, std::move(out));
}

BandedHamiltonian::BandedHamiltonian(int n, int kd) : n_(n), kd_(kd), ab_(std::size_t(n) * (kd + 1), 0.0) {}

double BandedHamiltonian::at(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) return 0.0;
    return ab_[(i - j) + std::size_t(j) * (kd_ + 1)];
}

void BandedHamiltonian::set(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) throw std::out_of_range("BandedHamiltonian: element outside band");
    ab_[(i - j) + std::size_t(j) * (kd_ + 1)] = v;
}

void BandedHamiltonian::add(int i, int j, double v) { set(i, j, at(i, j) + v); }

Eigen::MatrixXd BandedHamiltonian::dense() const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
        for (int i = j; i < std::min(n_, j + kd_ + 1); ++i) H(i, j) = H(j, i) = at(i, j);
    return H;
}

double BandedHamiltonian::max_abs() const {
    double m = 0.0;
    for (double v : ab_) m = std::max(m, std::abs(v));
    return m;
}

double hopping_T(int N, int Z, Spin mL, Spin mR) {
    const int a = mL == Down ? N + Z + 2 : N + Z;
    const int b = mR == Down ? N - Z : N - Z - 2;
    return double(a) * double(b);
}

BandedHamiltonian assemble_hamiltonian(const ModelParams& p, const FockBasis& basis) {
    p.validate();
    if (basis.N() != p.N || basis.size() == 0)
        throw config_error("assemble_hamiltonian: basis does not match params.N");
    const int N = p.N;

    struct Entry { int i, j; double v; };
    std::vector<Entry> entries;
    int kd = 0;
    auto push = [&](int i, int j, double v) {
        entries.push_back({i, j, v});
        kd = std::max(kd, std::abs(i - j));
    };

    for (int i = 0; i < basis.size(); ++i) {
        const auto& s = basis[i];
        if (p.eps_imb != 0.0) push(i, i, p.eps_imb * s.Z);

        // on-site JC couplings, only from the spin-down member of each pair
        if (s.mL == Down) {
            int k = basis.index(s.Z, Up, s.mR);
            if (k >= 0) push(i, k, p.g * std::sqrt((N + s.Z) / 2.0));
        }
        if (s.mR == Down) {
            int k = basis.index(s.Z, s.mL, Up);
            if (k >= 0) push(i, k, p.g * std::sqrt((N - s.Z) / 2.0));
        }

        int k = basis.index(s.Z + 2, s.mL, s.mR);
        if (k >= 0) push(i, k, -0.5 * p.J * std::sqrt(hopping_T(N, s.Z, s.mL, s.mR)));
    }

    BandedHamiltonian H(basis.size(), std::max(kd, 1));
    for (const auto& e : entries) H.add(e.i, e.j, e.v);
    return H;
}

Eigen::MatrixXd brute_force_hamiltonian(const ModelParams& p) {
    p.validate();
    if (p.N > kBruteForceMaxN) throw config_error("brute_force_hamiltonian: N above oracle scale");

    // full product space: qubit_L x qubit_R x photon_L x photon_R, photons 0..N+1
    const int nmax = p.N + 1;
    const int dph = nmax + 1;
    auto flat = [&](int sL, int sR, int nL, int nR) { return ((sL * 2 + sR) * dph + nL) * dph + nR; };
    const int D = 4 * dph * dph;

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D);
    for (int sL = 0; sL < 2; ++sL)
    for (int sR = 0; sR < 2; ++sR)
    for (int nL = 0; nL <= nmax; ++nL)
    for (int nR = 0; nR <= nmax; ++nR) {
        const int col = flat(sL, sR, nL, nR);
        // g (a sigma+ + a^dag sigma-) on each site
        if (sL == 0 && nL > 0) H(flat(1, sR, nL - 1, nR), col) += p.g * std::sqrt(double(nL));
        if (sL == 1 && nL < nmax) H(flat(0, sR, nL + 1, nR), col) += p.g * std::sqrt(double(nL + 1));
        if (sR == 0 && nR > 0) H(flat(sL, 1, nL, nR - 1), col) += p.g * std::sqrt(double(nR));
        if (sR == 1 && nR < nmax) H(flat(sL, 0, nL, nR + 1), col) += p.g * std::sqrt(double(nR + 1));
        // -J (aL^dag aR + aR^dag aL)
        if (nR > 0 && nL < nmax) H(flat(sL, sR, nL + 1, nR - 1), col) += -p.J * std::sqrt(double(nL + 1) * nR);
        if (nL > 0 && nR < nmax) H(flat(sL, sR, nL - 1, nR + 1), col) += -p.J * std::sqrt(double(nR + 1) * nL);
        // eps (n_L - n_R) with polariton counts
        H(col, col) += p.eps_imb * double((nL + sL) - (nR + sR));
    }

    std::vector<int> keep;
    for (int sL = 0; sL < 2; ++sL)
    for (int sR = 0; sR < 2; ++sR)
    for (int nL = 0; nL <= nmax; ++nL)
    for (int nR = 0; nR <= nmax; ++nR)
        if (nL + nR + sL + sR == p.N) keep.push_back(flat(sL, sR, nL, nR));

    const int d = static_cast<int>(keep.size());
    Eigen::MatrixXd P(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) P(a, b) = H(keep[a], keep[b]);
    return P;
}

std::vector<int> parity_permutation(const FockBasis& basis) {
    std::vector<int> perm(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
        const auto& s = basis[i];
        int k = basis.index(-s.Z, s.mR, s.mL);
        if (k < 0) throw numerical_error("parity_permutation: image state missing");
        perm[i] = k;
    }
    return perm;
}

}  // namespace jcdm
