#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qlre/lindblad_kernel.hpp"
#include "qlre/operator_algebra.hpp"

namespace qlre::bench {

using lindblad::LindbladSpec;
using lindblad::Mat;
using lindblad::RealMat;
using ops::OperatorSum;

// "field": ladder operators along the field axis (X), so the boundary drive
// pumps magnetization through the Ising couplings. "z": ladder operators along Z.
enum class DriveFrame { field, z };
DriveFrame frame_from_string(const std::string& s);
std::string to_string(DriveFrame f);

struct ProsenParams {
  int n = 4;
  double J = 1.5;
  double h = 1.0;
  double gamma_left_minus = 1.0;
  double gamma_left_plus = 0.6;
  double gamma_right_minus = 1.0;
  double gamma_right_plus = 0.3;
  DriveFrame frame = DriveFrame::field;
  lindblad::RateConvention convention = lindblad::RateConvention::doubled;

  void validate() const;
  lindblad::ChainModel chain() const { return {n, J, h}; }
};

LindbladSpec prosen_instance(const ProsenParams& p);
Mat prosen_initial_state(int n);  // all |0>
double liouvillian_gap(const ProsenParams& p);

struct GapFit {
  double coefficient = 0;  // least squares c in gap = c n^-3
  std::vector<int> n;
  std::vector<double> gap;
};
GapFit gap_law_fit(const std::vector<int>& n_range, lindblad::RateConvention conv = lindblad::RateConvention::doubled,
                   DriveFrame frame = DriveFrame::field);

struct TfimInstance {
  int n = 4;
  double J = -1.0;
  double h = -1.0;
  double time = 1.0;
  std::vector<std::array<int, 2>> observables;  // (i, j) pairs for Z_i Z_j

  OperatorSum hamiltonian() const;
  std::vector<OperatorSum> stabilizers() const;  // {X_i}
  OperatorSum observable(int i, int j) const;
  static TfimInstance with_all_pairs(int n, double time);
};

double pfaffian(const RealMat& A);

// Majorana covariance Gamma_pq = -(i/2) <[a_p, a_q]> in the Hadamard-rotated
// frame, a_2k = S_k X_k, a_2k+1 = S_k Y_k with S_k the Z string left of k.
struct CovarianceMatrix {
  RealMat gamma;
  std::string frame = "hadamard";
};
RealMat quadratic_form(const TfimInstance& inst);  // h with H = (i/4) sum h_pq a_p a_q
CovarianceMatrix covariance_at(const TfimInstance& inst, double t);
double free_fermion_correlator(const TfimInstance& inst, int i, int j, double t);
// Dense state-vector reference for <Z_i Z_j>(t) from |+>^n.
double dense_correlator(const TfimInstance& inst, int i, int j, double t);
RealMat dense_correlators(const TfimInstance& inst, double t);  // upper triangle (i < j)

struct PrepStep {
  enum class Kind { clifford, t_gate };
  Kind kind = Kind::clifford;
  ops::CliffordTableau tableau;
  int qubit = 0;
};

struct ObfuscatedInstance {
  int n = 0;
  OperatorSum hamiltonian;
  std::vector<OperatorSum> observables;
  std::vector<std::array<int, 2>> observable_sites;  // unobfuscated labels, kept out of distributed files
  std::vector<PrepStep> prep_circuit;                // applied to |0...0> in order
  std::vector<int> t_qubits;
  double time = 0;
  std::vector<double> sealed_answers;
  std::uint64_t seed = 0;
};

OperatorSum conjugate_by_steps(const std::vector<PrepStep>& steps, const OperatorSum& a);
ObfuscatedInstance obfuscate(const TfimInstance& inst, int n_t, std::uint64_t seed);
// Same as obfuscate with a caller-supplied Clifford (identity allowed).
ObfuscatedInstance obfuscate_with(const TfimInstance& inst, const std::vector<int>& t_qubits,
                                  const ops::CliffordTableau& clifford, std::uint64_t seed = 0);

struct DenseCheck {
  std::vector<double> dense_answers;
  double max_answer_error = 0;
  double spectrum_error = 0;
  double prep_state_error = 0;  // prep circuit vs conjugated |+><+| projector
};
DenseCheck dense_check(const TfimInstance& inst, const ObfuscatedInstance& ob);

struct DlaResult {
  std::size_t dimension = 0;
  bool capped = false;
};
DlaResult dla_dimension(const OperatorSum& h, std::size_t cap = 0);  // cap 0: 4^n - 1

}  // namespace qlre::bench
