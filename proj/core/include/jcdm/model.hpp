#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jcdm {

// thrown for bad user input (cli maps it to exit code 2)
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// thrown when a numerical procedure fails (exit code 3)
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelParams {
    int N = 1;
    double g = 1.0;
    double J = 1.0;
    double eps_imb = 0.0;

    double h() const { return 1.0 / N; }
    double gprime() const;

    void validate() const;

    // g' fixed, J given as a multiple of g'
    static ModelParams from_J_over_gprime(int N, double J_over_gp, double gp = 1.0);
    // J fixed, g given in units of J*sqrt(2N)
    static ModelParams from_g_over_Jsqrt2N(int N, double ratio, double J = 1.0);
};

enum Spin : std::uint8_t { Down = 0, Up = 1 };

struct BasisState {
    int Z = 0;
    Spin mL = Down;
    Spin mR = Down;

    int photons_L(int N) const { return (N + Z) / 2 - mL; }
    int photons_R(int N) const { return (N - Z) / 2 - mR; }
    bool operator==(const BasisState&) const = default;
};

class FockBasis {
public:
    FockBasis() = default;
    FockBasis(int N, std::vector<BasisState> states);

    int N() const { return N_; }
    int size() const { return static_cast<int>(states_.size()); }
    const BasisState& operator[](int i) const { return states_[i]; }
    const std::vector<BasisState>& states() const { return states_; }

    // -1 if the state is not admissible
    int index(int Z, Spin mL, Spin mR) const;

private:
    int N_ = 0;
    std::vector<BasisState> states_;
    std::vector<int> lookup_;  // (Z+N)/2*4 + 2*mL + mR
};

FockBasis enumerate_basis(int N);

// Lower-triangle symmetric band storage in LAPACK layout:
// ab[(i - j) + j*(kd+1)] = H(i, j) for j <= i <= j + kd.
class BandedHamiltonian {
public:
    BandedHamiltonian(int n, int kd);

    int dim() const { return n_; }
    int kd() const { return kd_; }
    double at(int i, int j) const;
    void set(int i, int j, double v);
    void add(int i, int j, double v);

    const std::vector<double>& storage() const { return ab_; }
    Eigen::MatrixXd dense() const;
    double max_abs() const;

private:
    int n_;
    int kd_;
    std::vector<double> ab_;
};

BandedHamiltonian assemble_hamiltonian(const ModelParams& p, const FockBasis& basis);

// Hopping amplitude T for the (Z, m) -> (Z+2, m) link
double hopping_T(int N, int Z, Spin mL, Spin mR);

constexpr int kBruteForceMaxN = 8;
Eigen::MatrixXd brute_force_hamiltonian(const ModelParams& p);

std::vector<int> parity_permutation(const FockBasis& basis);

}  // namespace jcdm
