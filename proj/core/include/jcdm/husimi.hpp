#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "jcdm/model.hpp"
#include "jcdm/spectra.hpp"

namespace jcdm::husimi {

struct HusimiGrid {
    std::vector<double> x;      // [-1, 1]
    std::vector<double> theta;  // [-pi/2, pi/2], endpoints identified
    Eigen::MatrixXd Q;          // Q(i, j) at (x[i], theta[j])
    double kappa = 0.0;
    double band4_weight = 1.0;
};

// (N^3 g^2 / 8 J^2)^(1/8)
double kappa0(const ModelParams& p);
// 1 at the ground state, rising linearly to 2 at the top of band 4 (-g' sqrt2)
double tuning(const ModelParams& p, double eps, double eps_ground);

// lower-lower amplitudes C4(Z), indexed by (Z + N)/2
HusimiGrid husimi_q(const std::vector<double>& C4, int N, double kappa, int nx = 201, int ntheta = 201);
// state n of sol; s <= 0 picks tuning(). Rejects states with band-4 weight below 0.5.
HusimiGrid husimi_q(const EigenSolution& sol, int n, double s = 0.0, int nx = 201, int ntheta = 201);

// band-4 eigenstate closest in energy to eps (-1 if band 4 is empty)
int nearest_band4_state(const EigenSolution& sol, double eps);

// connected regions of Q >= frac * max, periodic in theta
int count_components(const HusimiGrid& g, double frac = 0.5);
// Q at the grid point nearest (0, 0) is below frac * max
bool ring_like(const HusimiGrid& g, double frac = 0.5);

struct Moments {
    double mean_x = 0.0, mean_theta = 0.0;
    double var_x = 0.0, var_theta = 0.0;
};
Moments moments(const HusimiGrid& g);

struct Widths {
    double sigma_x = 0.0, sigma_theta = 0.0;
};
// ground state of H4 ~ -2g'-J + 2J theta^2 + (g'/4 + J/2) x^2 with [theta, x] = i/N
Widths harmonic_widths(const ModelParams& p);
// harmonic widths seen through the Husimi smoothing of width kappa
Widths smoothed_widths(const ModelParams& p, double kappa);

double H4(const ModelParams& p, double x, double theta);

using Polyline = std::vector<std::array<double, 2>>;
struct Contour {
    double level = 0.0;
    std::vector<Polyline> lines;
};
std::vector<Contour> classical_contours(const ModelParams& p, const std::vector<double>& levels, int nx = 201,
                                        int ntheta = 201);

}  // namespace jcdm::husimi
