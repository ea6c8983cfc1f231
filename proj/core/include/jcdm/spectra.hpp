#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "jcdm/model.hpp"

namespace jcdm {

struct EigenSolution {
    ModelParams params;
    FockBasis basis;
    Eigen::VectorXd eps;      // ascending E/N
    Eigen::MatrixXd vectors;  // column n is eigenvector n in the Fock basis
    std::vector<int> parity;  // +1 / -1, 0 when eps_imb != 0

    int size() const { return static_cast<int>(eps.size()); }
    // |Psi(Z)|^2 summed over spins, indexed by (Z + N)/2
    std::vector<double> profile(int n) const;
    // polariton-band amplitudes C_i(Z), i = 1..4 in columns 0..3
    Eigen::MatrixXd band_components(int n) const;
    double mean_x(int n) const;
};

EigenSolution diagonalize(const BandedHamiltonian& H, const ModelParams& p, const FockBasis& basis);
EigenSolution diagonalize(const ModelParams& p);

double max_eigen_residual(const BandedHamiltonian& H, const EigenSolution& sol);

struct SpectralMapRow {
    int state;
    double x;
    double eps;
    double weight;
};
std::vector<SpectralMapRow> spectral_map(const EigenSolution& sol);

struct DosHistogram {
    std::vector<double> edges;
    std::vector<int> counts;
    double center(int k) const { return 0.5 * (edges[k] + edges[k + 1]); }
    double mean_count() const;
};
DosHistogram dos(const EigenSolution& sol, int nbins = 101);

struct SplittingPair {
    int lower;  // index of the lower member
    double mean_eps;
    double delta;
};
struct SplittingResult {
    std::vector<SplittingPair> pairs;
    std::vector<int> unpaired;
    double mean_spacing = 0.0;
};
SplittingResult splittings(const EigenSolution& sol, double eps_lo, double eps_hi, double pair_fraction = 0.1);

struct ImbalancePoint {
    int state;
    double eps;
    double x0;      // classical starting point, eps = V_1^l(x0)
    double mean_x;  // quantum <x>
    bool localized_side;
};
struct ImbalanceMap {
    std::vector<ImbalancePoint> points;
    std::vector<int> skipped;
    double x_m = 0.0;
};
ImbalanceMap imbalance_map(const EigenSolution& sol);

}  // namespace jcdm
