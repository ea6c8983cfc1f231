#pragma once

#include <array>
#include <vector>

namespace jcdm::classical {

struct Site {
    double theta = 0.0;
    double phi = 0.0;
    double R = 0.0;
    double I = 0.0;
};

struct ClassicalState {
    Site L;
    Site R;
    double S = 0.5;
};

struct Couplings {
    double g = 1.0;
    double J = 1.0;
};

// d/dt of (theta_L, phi_L, R_L, I_L, theta_R, phi_R, R_R, I_R) in the rotating frame
std::array<double, 8> eom_full(const ClassicalState& s, const Couplings& c);

// Cartesian form used for integration: (nL[3], nR[3], R_L, I_L, R_R, I_R),
// n = (sin th cos ph, sin th sin ph, -cos th)
using Cart = std::array<double, 10>;
Cart to_cartesian(const ClassicalState& s);
ClassicalState from_cartesian(const Cart& y, double S);
void eom_cartesian(const Cart& y, Cart& dy, const Couplings& c, double S);

double energy(const ClassicalState& s, const Couplings& c);
double energy(const Cart& y, const Couplings& c, double S);
// sum over sites of |psi|^2 + S(1 + n_z)
double polariton_number(const Cart& y, double S);
// (p_L - p_R)/(p_L + p_R)
double imbalance(const Cart& y, double S);

struct Trajectory {
    std::vector<double> t;
    std::vector<Cart> y;
    double energy_drift = 0.0;  // max |E(t) - E(0)| / (g S sqrt(N_cl) + J N_cl)
    double number_drift = 0.0;  // max |N_cl(t) - N_cl(0)| / N_cl(0)
    long steps = 0;
};
// Adaptive Dormand-Prince 5(4) with dense output; samples at every sample_dt
// (or at the accepted steps when sample_dt <= 0).
Trajectory integrate(const ClassicalState& s0, const Couplings& c, double t_max, double tol,
                     double sample_dt = 0.0);
Trajectory integrate(const Cart& y0, double S, const Couplings& c, double t0, double t_max, double tol,
                     double sample_dt = 0.0);

// Fig. 7 protocol: spins (0,0) and (theta_R0, 0), all photons on the left
ClassicalState fig7_initial_state(double theta_R0, int N, double S = 0.5);

struct AverageResult {
    double average = 0.0;
    double first_half = 0.0;
    bool converged = true;
};
// time average of the normalized imbalance over [t_transient, t_transient + t_avg]
AverageResult averaged_imbalance(const ClassicalState& s0, const Couplings& c, double t_transient, double t_avg,
                                 double tol = 1e-9);

struct ScanOptions {
    double t_avg_J = 200.0;        // window in units of 1/J
    double t_transient_J = 20.0;
    double tol = 1e-9;
    double threshold = 0.5;
    double S = 0.5;
    int threads = 1;
};

struct ScanResult {
    std::vector<double> theta_R0;
    std::vector<double> coupling;             // g/(2J sqrt N)
    std::vector<std::vector<double>> average;  // [theta][coupling]
    std::vector<std::vector<bool>> converged;
    std::vector<double> threshold;            // per theta, nan if no crossing
};
ScanResult threshold_scan(const std::vector<double>& theta_R0, const std::vector<double>& coupling, int N,
                          double J, const ScanOptions& o = {});

// coupling where the averaged imbalance crosses o.threshold, by bisection on [lo, hi]
double refine_threshold(double theta_R0, double lo, double hi, int N, double J, const ScanOptions& o = {},
                        double tol = 2e-3);

// g_c/(2J sqrt N) of the pendulum picture
double pendulum_critical(double theta_R0);

// restricted manifold I_L = R_R = 0, phi_L = pi/2, phi_R = 0: (theta_L, theta_R, R_L, I_R)
using State4 = std::array<double, 4>;
State4 eom_restricted(const State4& s, const Couplings& c, double S = 0.5);
ClassicalState embed_restricted(const State4& s, double S = 0.5);
// conserved on the restricted manifold
double restricted_invariant(const State4& s, double S = 0.5);

struct SectionPoint {
    long crossing;
    double R_L, I_R, r, alpha;
    double theta_L;  // residual check, equals the section value mod 2 pi
};
struct PoincareResult {
    std::vector<SectionPoint> points;
    bool complete = true;
    double t_end = 0.0;
};
PoincareResult poincare_section(const State4& s0, const Couplings& c, int N, int n_crossings, double section = 0.0,
                                double t_max = 1e5, double S = 0.5, double tol = 1e-10);

// Fraction of occupied cells of an m x m grid over the bounding box of the
// (R_L, I_R) section points: ~1/m for an invariant curve, O(1) for a chaotic sea.
double section_fill(const PoincareResult& res, int m = 32);

}  // namespace jcdm::classical
