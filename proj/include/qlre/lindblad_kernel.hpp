#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlre/lattice_models.hpp"
#include "qlre/operator_algebra.hpp"

namespace qlre::lindblad {

using ops::cplx;
using ops::OperatorSum;
using Mat = Eigen::MatrixXcd;
using RealMat = Eigen::MatrixXd;

// doubled: 2 L rho L^dag - {L^dag L, rho};  half: L rho L^dag - 1/2 {L^dag L, rho}
enum class RateConvention { doubled, half };
RateConvention convention_from_string(const std::string& s);
std::string to_string(RateConvention c);
double rate_factor(RateConvention c);

struct Generator {
  cplx amplitude{1.0, 0.0};
  OperatorSum op;
  OperatorSum effective() const { return op * amplitude; }
};

struct LindbladSpec {
  OperatorSum hamiltonian;
  std::vector<Generator> generators;
  RateConvention convention = RateConvention::doubled;

  int n() const { return hamiltonian.site_count(); }
  void validate() const;
};

constexpr int kSuperopGuard = 6;  // dense 4^n x 4^n superoperators
constexpr int kStateGuard = 7;    // dense 2^n x 2^n states

struct DensityMatrix {
  Mat data;
  RateConvention convention = RateConvention::doubled;

  double hermiticity_error() const;
  double trace_error() const;
  double min_eigenvalue() const;
  bool valid(double tol = 1e-10) const;
};

struct DegenerateSteadyState : std::runtime_error {
  int dimension;
  explicit DegenerateSteadyState(int d)
      : std::runtime_error("steady state is degenerate (null space dimension " + std::to_string(d) + ")"),
        dimension(d) {}
};

// Direct evaluation of the master-equation right-hand side.
Mat apply_rhs(const LindbladSpec& spec, const Mat& rho);
// Column-stacking superoperator, vec(A rho B) = (B^T kron A) vec(rho).
Mat build_liouvillian(const LindbladSpec& spec);
Mat dissipator_superop(const Mat& L, double factor);
Mat vec(const Mat& rho);
Mat unvec(const Mat& v, int dim);

// Real generator in the Pauli basis: rho = 2^-n sum_a r_a P_a, dr/dt = G r.
Eigen::SparseMatrix<double> pauli_generator(const LindbladSpec& spec);
std::vector<cplx> liouvillian_eigenvalues(const LindbladSpec& spec);
double spectral_gap(const LindbladSpec& spec, double zero_tol = 1e-9);

DensityMatrix evolve(const LindbladSpec& spec, const Mat& rho0, double t);
DensityMatrix steady_state(const LindbladSpec& spec);
// Sparse solve restricted to density-matrix entries |a><b| whose charges agree,
// for every mask, between a and b. Needs H and the generators to respect the
// charges (U(1) per mask on the Hamiltonian, fixed shift per generator).
DensityMatrix steady_state_charge_sector(const LindbladSpec& spec, const std::vector<std::uint64_t>& masks);

struct DilationBlocks {
  Mat L, R, M, D;
  Mat assembled() const;
};
DilationBlocks dilation(const Mat& L);

class QuantumChannel {
 public:
  QuantumChannel() = default;
  explicit QuantumChannel(Mat superop);
  static QuantumChannel identity(int dim);
  static QuantumChannel from_kraus(const std::vector<Mat>& kraus);
  static QuantumChannel exp_generator(const Mat& superop, double t);
  static QuantumChannel unitary(const Mat& U);

  int dim() const { return dim_; }
  const Mat& superop() const { return s_; }
  Mat apply(const Mat& rho) const;
  Mat choi() const;
  QuantumChannel then(const QuantumChannel& next) const;  // next after this

 private:
  int dim_ = 0;
  Mat s_;
};

struct WeakChannel {
  std::vector<Mat> kraus;  // K0, K1, K2
  QuantumChannel channel;
  double completeness_error = 0;
};
WeakChannel weak_channel(const Mat& L, double delta);
Mat weak_channel_closed_form(const Mat& L, double delta, const Mat& rho);

struct ChannelDistance {
  double max_trace_distance = 0;  // max over sampled states of ||a(rho) - b(rho)||_1
  double choi_trace_norm = 0;     // ||J_a - J_b||_1 / dim
};
ChannelDistance channel_distance(const QuantumChannel& a, const QuantumChannel& b, int n_states,
                                 std::uint64_t seed = 7);

Mat random_density_matrix(int dim, std::mt19937_64& rng);
Mat random_contraction(int dim, std::mt19937_64& rng, double max_norm = 1.0);
double spectral_norm(const Mat& m);
double trace_norm(const Mat& m);

struct TrotterCheck {
  double lhs_exact = 0;  // exact per-group factors
  double lhs_weak = 0;   // every generator through its weak-measurement channel
  double rhs = 0;
  double weak_allowance = 0;  // 5 delta^2 per weak channel
  bool pass = false;
};
// Groups hold generator indices whose dissipators commute. `spec` must use the
// half convention (the bound is stated there).
TrotterCheck verify_trotter_bound(const LindbladSpec& spec, double delta, const std::vector<std::vector<int>>& groups,
                                  int n_states = 40, std::uint64_t seed = 11);
std::vector<std::vector<int>> disjoint_support_groups(const LindbladSpec& spec);

// Ising-type chain sum J Z_m Z_{m+1} + h X_m used by the current observables.
struct ChainModel {
  int n = 0;
  double J = 1.5;
  double h = 1.0;
  OperatorSum hamiltonian() const;
  OperatorSum bond_term(int m) const;  // spin-current bond term, ends carry their full field
  OperatorSum site_term(int m) const;  // h X_m plus half of each adjacent coupling
};

struct CurrentProfile {
  std::vector<double> spin;    // per bond
  std::vector<double> energy;  // i[h_m, h_{m+1}], site-centered energy densities
  double spin_avg = 0;
  double energy_avg = 0;
  double max_imag = 0;  // largest imaginary part seen, should vanish
};
CurrentProfile measure_currents(const ChainModel& chain, const Mat& rho);
OperatorSum spin_current_operator(const ChainModel& chain, int m);
OperatorSum energy_current_operator(const ChainModel& chain, int m);

enum class AmplitudeMode { simulation, cost };  // sqrt(rate) vs rate
struct CaGenerators {
  std::vector<Generator> generators;
  std::vector<double> rates;  // parallel to generators
  int classes_per_spin_max = 0;
};
CaGenerators ca_lindblad_generators(const models::CaPatch& patch, double beta, AmplitudeMode mode,
                                    double h_long = 0.0);
// Classical rate matrix W(c' <- c) = sum_mu |<c'|L_mu|c>|^2 on the diagonal restriction.
RealMat classical_rate_matrix(const std::vector<Generator>& gens, int n);
Eigen::VectorXd gibbs_distribution(const models::CaPatch& patch, double beta, double h_long = 0.0);
Eigen::VectorXd stationary_distribution(const RealMat& W);

std::vector<Generator> hubbard_landauer_generators(const models::HubbardLattice& lat, double amplitude = 1.0);
LindbladSpec hubbard_landauer_spec(const models::HubbardLattice& lat, double amplitude = 1.0);

}  // namespace qlre::lindblad
