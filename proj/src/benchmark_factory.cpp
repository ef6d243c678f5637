#include "qlre/benchmark_factory.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "qlre/lattice_models.hpp"

namespace qlre::bench {

using ops::cplx;
using ops::Letter;
using ops::PauliString;
using ops::PauliTerm;

DriveFrame frame_from_string(const std::string& s) {
  if (s == "field") return DriveFrame::field;
  if (s == "z") return DriveFrame::z;
  throw std::invalid_argument("unknown drive frame: " + s);
}

std::string to_string(DriveFrame f) { return f == DriveFrame::field ? "field" : "z"; }

void ProsenParams::validate() const {
  if (n < 3) throw std::invalid_argument("prosen: n >= 3");
  for (double g : {gamma_left_minus, gamma_left_plus, gamma_right_minus, gamma_right_plus})
    if (!(g > 0)) throw std::invalid_argument("prosen: rates must be positive");
}

namespace {
// sigma^- / sigma^+ along the chosen axis; on Z, sigma^- = |0><1|.
OperatorSum ladder(int n, int q, bool lower, DriveFrame f) {
  const cplx s = lower ? cplx(0, 1) : cplx(0, -1);
  if (f == DriveFrame::z)
    return (OperatorSum::single(n, q, Letter::X) + OperatorSum::single(n, q, Letter::Y, s)) * cplx(0.5);
  // Hadamard image: X -> Z, Y -> -Y
  return (OperatorSum::single(n, q, Letter::Z) + OperatorSum::single(n, q, Letter::Y, -s)) * cplx(0.5);
}
}  // namespace

LindbladSpec prosen_instance(const ProsenParams& p) {
  p.validate();
  const int n = p.n;
  LindbladSpec s;
  s.hamiltonian = p.chain().hamiltonian();
  s.convention = p.convention;
  s.generators = {{0.5 * std::sqrt(p.gamma_left_minus), ladder(n, 0, true, p.frame)},
                  {0.5 * std::sqrt(p.gamma_left_plus), ladder(n, 0, false, p.frame)},
                  {0.5 * std::sqrt(p.gamma_right_minus), ladder(n, n - 1, true, p.frame)},
                  {0.5 * std::sqrt(p.gamma_right_plus), ladder(n, n - 1, false, p.frame)}};
  return s;
}

Mat prosen_initial_state(int n) {
  Mat rho = Mat::Zero(1 << n, 1 << n);
  rho(0, 0) = 1.0;
  return rho;
}

double liouvillian_gap(const ProsenParams& p) { return lindblad::spectral_gap(prosen_instance(p)); }

GapFit gap_law_fit(const std::vector<int>& n_range, lindblad::RateConvention conv, DriveFrame frame) {
  GapFit fit;
  double num = 0, den = 0;
  for (int n : n_range) {
    ProsenParams p;
    p.n = n;
    p.convention = conv;
    p.frame = frame;
    const double g = liouvillian_gap(p);
    const double x = std::pow(n, -3.0);
    num += g * x;
    den += x * x;
    fit.n.push_back(n);
    fit.gap.push_back(g);
  }
  if (den == 0) throw std::invalid_argument("gap_law_fit: empty range");
  fit.coefficient = num / den;
  return fit;
}

OperatorSum TfimInstance::hamiltonian() const { return models::tfim_hamiltonian(n, J, h); }

std::vector<OperatorSum> TfimInstance::stabilizers() const {
  std::vector<OperatorSum> out;
  for (int i = 0; i < n; ++i) out.push_back(OperatorSum::single(n, i, Letter::X));
  return out;
}

OperatorSum TfimInstance::observable(int i, int j) const {
  if (i < 0 || j >= n || i >= j) throw std::invalid_argument("observable: need 0 <= i < j < n");
  return OperatorSum::pauli(n, PauliString({{std::uint32_t(i), Letter::Z}, {std::uint32_t(j), Letter::Z}}));
}

TfimInstance TfimInstance::with_all_pairs(int n, double time) {
  TfimInstance t;
  t.n = n;
  t.time = time;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) t.observables.push_back({i, j});
  return t;
}

double pfaffian(const RealMat& A_in) {
  const Eigen::Index n = A_in.rows();
  if (A_in.cols() != n) throw std::invalid_argument("pfaffian: square matrix required");
  if ((A_in + A_in.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A_in.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("pfaffian: matrix is not antisymmetric");
  if (n == 0) return 1.0;
  if (n % 2) return 0.0;
  RealMat A = A_in;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      pf = -pf;
    }
    if (A(k + 1, k) == 0.0) return 0.0;
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const Eigen::VectorXd tau = A.row(k).tail(n - k - 2).transpose() / A(k, k + 1);
      const Eigen::VectorXd col = A.col(k + 1).tail(n - k - 2);
      A.bottomRightCorner(n - k - 2, n - k - 2) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

RealMat quadratic_form(const TfimInstance& inst) {
  const int n = inst.n;
  RealMat h = RealMat::Zero(2 * n, 2 * n);
  // term c * (-i a_p a_q) contributes h_pq = -2c, h_qp = 2c
  auto add = [&](int p, int q, double c) {
    h(p, q) += -2.0 * c;
    h(q, p) += 2.0 * c;
  };
  // Hadamard frame: J X_k X_k+1 + h Z_k
  for (int k = 0; k + 1 < n; ++k) add(2 * k + 1, 2 * k + 2, inst.J);
  for (int k = 0; k < n; ++k) add(2 * k, 2 * k + 1, inst.h);
  return h;
}

CovarianceMatrix covariance_at(const TfimInstance& inst, double t) {
  const int n = inst.n;
  RealMat g0 = RealMat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    g0(2 * k, 2 * k + 1) = 1.0;
    g0(2 * k + 1, 2 * k) = -1.0;
  }
  const RealMat R = RealMat(quadratic_form(inst) * t).exp();
  CovarianceMatrix c;
  c.gamma = R * g0 * R.transpose();
  c.gamma = (0.5 * (c.gamma - c.gamma.transpose())).eval();
  return c;
}

double free_fermion_correlator(const TfimInstance& inst, int i, int j, double t) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= inst.n || i == j) throw std::invalid_argument("free_fermion_correlator: need distinct sites");
  const CovarianceMatrix c = covariance_at(inst, t);
  const int m = 2 * (j - i);
  return pfaffian(c.gamma.block(2 * i + 1, 2 * i + 1, m, m));
}

RealMat dense_correlators(const TfimInstance& inst, double t) {
  const int n = inst.n;
  if (n > 12) throw std::length_error("dense_correlators: n <= 12");
  const int d = 1 << n;
  const RealMat H = ops::to_dense(inst.hamiltonian()).real();  // TFIM is real symmetric
  Eigen::SelfAdjointEigenSolver<RealMat> es(H);
  const Eigen::VectorXd plus = Eigen::VectorXd::Constant(d, std::pow(2.0, -0.5 * n));
  Eigen::VectorXcd c = (es.eigenvectors().transpose() * plus).cast<cplx>();
  for (int k = 0; k < d; ++k) c(k) *= std::exp(cplx(0, -es.eigenvalues()(k) * t));
  const Eigen::VectorXcd psi = es.eigenvectors().cast<cplx>() * c;
  RealMat out = RealMat::Zero(n, n);
  for (int k = 0; k < d; ++k) {
    const double p = std::norm(psi(k));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const bool flip = ((k >> (n - 1 - i)) & 1) ^ ((k >> (n - 1 - j)) & 1);
        out(i, j) += flip ? -p : p;
      }
  }
  return out;
}

double dense_correlator(const TfimInstance& inst, int i, int j, double t) {
  if (i > j) std::swap(i, j);
  return dense_correlators(inst, t)(i, j);
}

OperatorSum conjugate_by_steps(const std::vector<PrepStep>& steps, const OperatorSum& a) {
  OperatorSum out = a;
  for (auto& s : steps)
    out = s.kind == PrepStep::Kind::clifford ? ops::conjugate_by_clifford(s.tableau, out)
                                             : ops::conjugate_by_T(s.qubit, out);
  return out;
}

ObfuscatedInstance obfuscate_with(const TfimInstance& inst, const std::vector<int>& t_qubits,
                                  const ops::CliffordTableau& clifford, std::uint64_t seed) {
  const int n = inst.n;
  ObfuscatedInstance ob;
  ob.n = n;
  ob.seed = seed;
  ob.time = inst.time;
  ob.t_qubits = t_qubits;
  std::vector<PrepStep> w;
  for (int q : t_qubits) w.push_back({PrepStep::Kind::t_gate, {}, q});
  w.push_back({PrepStep::Kind::clifford, clifford, 0});
  ob.hamiltonian = conjugate_by_steps(w, inst.hamiltonian());
  for (auto& [i, j] : inst.observables) {
    ob.observables.push_back(conjugate_by_steps(w, inst.observable(i, j)));
    ob.observable_sites.push_back({i, j});
    ob.sealed_answers.push_back(free_fermion_correlator(inst, i, j, inst.time));
  }
  ob.prep_circuit.push_back({PrepStep::Kind::clifford, ops::CliffordTableau::hadamard_all(n), 0});
  ob.prep_circuit.insert(ob.prep_circuit.end(), w.begin(), w.end());
  return ob;
}

ObfuscatedInstance obfuscate(const TfimInstance& inst, int n_t, std::uint64_t seed) {
  if (n_t < 0) throw std::invalid_argument("obfuscate: n_t >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, inst.n - 1);
  std::vector<int> tq;
  for (int k = 0; k < n_t; ++k) tq.push_back(pick(rng));
  return obfuscate_with(inst, tq, ops::random_clifford(inst.n, rng()), seed);
}

namespace {
OperatorSum product_projector(int n, Letter l) {
  OperatorSum p = OperatorSum::identity(n);
  for (int q = 0; q < n; ++q) p = p * ((OperatorSum::identity(n) + OperatorSum::single(n, q, l)) * cplx(0.5));
  return p;
}
}  // namespace

DenseCheck dense_check(const TfimInstance& inst, const ObfuscatedInstance& ob) {
  const int n = inst.n;
  if (n > 8) throw std::length_error("dense_check: n <= 8");
  DenseCheck dc;
  // |0><0| pushed through the prep circuit vs |+><+| pushed through the obfuscation
  const Mat rho_prep = ops::to_dense(conjugate_by_steps(ob.prep_circuit, product_projector(n, Letter::Z)));
  std::vector<PrepStep> w(ob.prep_circuit.begin() + 1, ob.prep_circuit.end());
  const Mat rho = ops::to_dense(conjugate_by_steps(w, product_projector(n, Letter::X)));
  dc.prep_state_error = (rho_prep - rho).cwiseAbs().maxCoeff();

  const Mat H0 = ops::to_dense(inst.hamiltonian());
  const Mat H1 = ops::to_dense(ob.hamiltonian);
  Eigen::SelfAdjointEigenSolver<Mat> e0(H0, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat> e1(H1);
  dc.spectrum_error = (e0.eigenvalues() - e1.eigenvalues()).cwiseAbs().maxCoeff();

  const Eigen::Index d = H1.rows();
  Eigen::VectorXcd phase(d);
  for (Eigen::Index k = 0; k < d; ++k) phase(k) = std::exp(cplx(0, -e1.eigenvalues()(k) * ob.time));
  const Mat U = e1.eigenvectors() * phase.asDiagonal() * e1.eigenvectors().adjoint();
  const Mat rho_t = U * rho_prep * U.adjoint();
  for (std::size_t k = 0; k < ob.observables.size(); ++k) {
    const double v = ops::expectation(ob.observables[k], rho_t).real();
    dc.dense_answers.push_back(v);
    if (k < ob.sealed_answers.size())
      dc.max_answer_error = std::max(dc.max_answer_error, std::abs(v - ob.sealed_answers[k]));
  }
  return dc;
}

DlaResult dla_dimension(const OperatorSum& h, std::size_t cap) {
  const int n = h.site_count();
  if (n > 8) throw std::length_error("dla_dimension: n <= 8");
  const std::size_t full = (std::size_t(1) << (2 * n)) - 1;
  if (cap == 0 || cap > full) cap = full;
  // reaching the full algebra is completion, not truncation
  const bool truncating = cap < full;
  // Brackets of Pauli strings are Pauli strings, so the closure of the term
  // set is spanned by strings and its dimension is the set size.
  std::vector<PauliString> gens;
  for (auto& t : h.terms())
    if (!t.letters.is_identity()) gens.push_back(t.letters);
  std::set<PauliString> seen(gens.begin(), gens.end());
  std::deque<PauliString> queue(seen.begin(), seen.end());
  DlaResult r;
  if (seen.size() >= cap) return {cap, truncating};
  while (!queue.empty()) {
    const PauliString p = queue.front();
    queue.pop_front();
    for (auto& g : gens) {
      if (g.commutes_with(p)) continue;
      PauliString q = ops::multiply({1.0, g}, {1.0, p}).letters;
      if (seen.insert(q).second) {
        if (seen.size() >= cap) return {cap, truncating};
        queue.push_back(std::move(q));
      }
    }
  }
  r.dimension = seen.size();
  return r;
}

}  // namespace qlre::bench
