#pragma once

#include <array>
#include <string>
#include <vector>

#include "jcdm/model.hpp"

namespace jcdm::wkb {

// Bands: 1 upper-upper, 2 upper-lower, 3 lower-upper, 4 lower-lower.
enum class Edge { Low, High };
enum class Regime { Delocalized, Localized, Critical, Middle };

std::string to_string(Regime r);

struct Options {
    double critical_c = 2.0;          // window |eps - eps_c| < c (J/N) ln N
    double band1_tunnel_coeff = 1.0;  // prefactor of exp(-dQ/h) in the band-1 localized rule
    double band4_tunnel_coeff = 0.25;
    bool middle_yr_over_h = true;     // (pi/2) y_r / h instead of (pi/2) y_r
    double quad_tol = 1e-12;
};

double W(const ModelParams& p, int band, double x);
double potential(const ModelParams& p, int band, Edge edge, double x);

// r = (eps - W)/(-J sqrt(1-x^2)); allowed motion for |r| <= 1
double momentum_ratio(const ModelParams& p, int band, double eps, double x);
double momentum_allowed(const ModelParams& p, int band, double eps, double x);
double momentum_tilde(const ModelParams& p, int band, double eps, double x);
double momentum_forbidden(const ModelParams& p, int band, double eps, double x);
// real part of phi continued through the forbidden regions (0 below V^l, pi/2 above V^h)
double momentum_real(const ModelParams& p, int band, double eps, double x);

double critical_energy(const ModelParams& p, int band);  // eps_c for bands 1 and 4
double critical_halfwidth(const ModelParams& p, const Options& o = {});
std::array<double, 2> band_envelope(const ModelParams& p, int band);

// band of an energy when bands do not overlap: 4 below -g'sqrt2, 1 above g'sqrt2, else 2
int band_of(const ModelParams& p, double eps);

struct BandGeometry {
    int band = 4;
    double eps = 0.0;
    double z_l = 0.0;
    double z_h = 0.0;
    double y_r = 0.0;
    bool has_zh = false;
    Regime regime = Regime::Delocalized;
};

// closed form of the band-1/band-4 turning point (nan if none)
double turning_point_closed_form(const ModelParams& p, int band, Edge edge, double eps);
// root of V(x) = eps on [lo, hi] by bisection (nan if no sign change)
double turning_point_bisect(const ModelParams& p, int band, Edge edge, double eps, double lo, double hi);
double y_r(const ModelParams& p, double eps);

BandGeometry turning_points(const ModelParams& p, int band, double eps, const Options& o = {});

struct ActionPair {
    double dS = 0.0;
    double dQ = 0.0;
};

// Regime-appropriate action pair (dS is dS_eff where the rule uses it).
ActionPair actions(const ModelParams& p, const BandGeometry& geo, const Options& o = {});
double action_S(const ModelParams& p, int band, double eps, const Options& o = {});
double action_Q(const ModelParams& p, int band, double eps, const Options& o = {});
// int_0^1 Re phi_4 dx, the symmetric half-action of band 4 (band 1 by mirror)
double half_action(const ModelParams& p, int band, double eps, const Options& o = {});

// Signed residual wrapped into (-pi/2, pi/2]. For localized states
// branch = +1 / -1 selects the sign of the tunnelling term.
double signed_residual(const ModelParams& p, int band, Regime regime, double eps, int branch = +1,
                       const Options& o = {});
double quantization_residual(const ModelParams& p, int band, Regime regime, double eps,
                             const Options& o = {});

struct DefectRecord {
    double eps = 0.0;
    int band = 4;
    Regime regime = Regime::Delocalized;
    double standard = 0.0;  // Bohr-Sommerfeld rule of the side of eps_c
    double critical = 0.0;  // Gamma-function rule (nan outside the window)
    double matched = 0.0;   // rule selected by the regime
};
DefectRecord defect(const ModelParams& p, double eps, const Options& o = {});

struct Level {
    double eps;
    long n;
    int branch;
};
// Levels of one regime window by bracketing + bisection.
std::vector<Level> solve_levels(const ModelParams& p, int band, Regime regime, const Options& o = {});

double predicted_splitting(const ModelParams& p, double eps, const Options& o = {});

struct ClassicalOrbit {
    double eps = 0.0;
    double a = 0.0, b = 0.0;  // orbit limits
    double period = 0.0;
    double mean_x = 0.0;
};
double velocity(const ModelParams& p, int band, double eps, double x);
ClassicalOrbit classical_orbit(const ModelParams& p, int band, double x0);

// critical g/(J sqrt(2N)) for an initial position x0
double phase_boundary(double x0);
// critical g/J for N polaritons
double phase_boundary_g_over_J(double x0, int N);
// local maximum of V_1^l, defined for 1/2 <= J/g' <= 1/sqrt2
double barrier_position(double J_over_gp);
// 0 below 1/2 and 1 above 1/sqrt2
double localization_edge(double J_over_gp);

using Matrix4 = std::array<std::array<double, 4>, 4>;
Matrix4 first_order_coupling(double J, double x);
// |h d_x S^(1)| with unit amplitude ratios: how strongly other bands feed band i at x
double first_order_correction(const ModelParams& p, int band, double eps, double x);

std::vector<double> wkb_wavefunction(const ModelParams& p, int band, double eps,
                                     const std::vector<double>& x, int parity = +1,
                                     const Options& o = {});

}  // namespace jcdm::wkb
