#include "qlre/lindblad_kernel.hpp"

#include <lapacke.h>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unsupported/Eigen/MatrixFunctions>

#include "qlre/evolution_estimator.hpp"

namespace qlre::lindblad {

using ops::Letter;
using ops::PauliString;
using ops::PauliTerm;

namespace {

const cplx kI{0.0, 1.0};

void check_dim(int n, int guard, const char* what) {
  if (n < 1 || n > guard)
    throw std::length_error(std::string(what) + ": " + std::to_string(n) + " qubits outside dense guard " +
                            std::to_string(guard));
}

struct DenseSpec {
  int dim = 0;
  double f = 1;
  Mat H;
  std::vector<Mat> L, LdL;

  explicit DenseSpec(const LindbladSpec& spec) {
    spec.validate();
    check_dim(spec.n(), 10, "dense spec");
    f = rate_factor(spec.convention);
    H = ops::to_dense(spec.hamiltonian);
    dim = static_cast<int>(H.rows());
    for (auto& g : spec.generators) {
      L.push_back(ops::to_dense(g.effective()));
      LdL.push_back(L.back().adjoint() * L.back());
    }
  }

  Mat rhs(const Mat& rho) const {
    Mat out = -kI * (H * rho - rho * H);
    for (std::size_t k = 0; k < L.size(); ++k)
      out += f * (L[k] * rho * L[k].adjoint() - 0.5 * (LdL[k] * rho + rho * LdL[k]));
    return out;
  }
};

// S += s * kron(A, B) for dense A, B.
void add_kron(Mat& S, const Mat& A, const Mat& B, cplx s) {
  const Eigen::Index da = A.rows(), db = B.rows();
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) {
      const cplx a = A(i, j);
      if (a == cplx(0.0)) continue;
      S.block(i * db, j * db, db, db) += (s * a) * B;
    }
}

Mat sqrt_psd(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Connected blocks of the sparsity pattern; G is block diagonal in them.
std::vector<std::vector<int>> blocks_of(const Eigen::SparseMatrix<double>& G) {
  const int N = static_cast<int>(G.rows());
  UnionFind uf(N);
  for (int c = 0; c < G.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(G, c); it; ++it) uf.unite(static_cast<int>(it.row()), c);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < N; ++i) groups[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, idx] : groups) out.push_back(std::move(idx));
  return out;
}

RealMat dense_block(const Eigen::SparseMatrix<double>& G, const std::vector<int>& idx) {
  std::vector<int> local(G.rows(), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) local[idx[k]] = static_cast<int>(k);
  RealMat B = RealMat::Zero(idx.size(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(G, idx[k]); it; ++it) B(local[it.row()], k) = it.value();
  return B;
}

std::vector<cplx> real_eigenvalues(RealMat A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  std::vector<double> wr(n), wi(n);
  lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, A.data(), n, wr.data(), wi.data(), nullptr, 1,
                                  nullptr, 1);
  if (info != 0) throw std::runtime_error("dgeev failed with info " + std::to_string(info));
  std::vector<cplx> out(n);
  for (lapack_int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

int nullity(const RealMat& B) {
  Eigen::ColPivHouseholderQR<RealMat> qr(B);
  qr.setThreshold(1e-9);
  return static_cast<int>(B.cols() - qr.rank());
}

}  // namespace

RateConvention convention_from_string(const std::string& s) {
  if (s == "doubled") return RateConvention::doubled;
  if (s == "half") return RateConvention::half;
  throw std::invalid_argument("unknown rate convention: " + s);
}

std::string to_string(RateConvention c) { return c == RateConvention::doubled ? "doubled" : "half"; }

double rate_factor(RateConvention c) { return c == RateConvention::doubled ? 2.0 : 1.0; }

void LindbladSpec::validate() const {
  if (n() < 1) throw std::invalid_argument("LindbladSpec: no qubits");
  for (auto& g : generators) {
    if (g.op.site_count() != n()) throw std::invalid_argument("LindbladSpec: generator width mismatch");
    if (!std::isfinite(g.amplitude.real()) || !std::isfinite(g.amplitude.imag()))
      throw std::invalid_argument("LindbladSpec: non-finite amplitude");
  }
}

double DensityMatrix::hermiticity_error() const { return (data - data.adjoint()).cwiseAbs().maxCoeff(); }
double DensityMatrix::trace_error() const { return std::abs(data.trace() - cplx(1.0)); }
double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (data + data.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}
bool DensityMatrix::valid(double tol) const {
  return hermiticity_error() <= tol && trace_error() <= tol && min_eigenvalue() >= -1e-9;
}

Mat apply_rhs(const LindbladSpec& spec, const Mat& rho) { return DenseSpec(spec).rhs(rho); }

Mat vec(const Mat& rho) { return rho.reshaped(rho.size(), 1); }
Mat unvec(const Mat& v, int dim) { return v.reshaped(dim, dim); }

Mat dissipator_superop(const Mat& L, double factor) {
  const Eigen::Index d = L.rows();
  Mat S = Mat::Zero(d * d, d * d);
  const Mat Id = Mat::Identity(d, d);
  const Mat LdL = L.adjoint() * L;
  add_kron(S, L.conjugate(), L, factor);
  add_kron(S, Id, LdL, -0.5 * factor);
  add_kron(S, LdL.transpose(), Id, -0.5 * factor);
  return S;
}

Mat build_liouvillian(const LindbladSpec& spec) {
  check_dim(spec.n(), kSuperopGuard, "build_liouvillian");
  DenseSpec ds(spec);
  const int d = ds.dim;
  const Mat Id = Mat::Identity(d, d);
  Mat S = Mat::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
  add_kron(S, Id, ds.H, -kI);
  add_kron(S, ds.H.transpose(), Id, kI);
  for (auto& L : ds.L) S += dissipator_superop(L, ds.f);
  return S;
}

Eigen::SparseMatrix<double> pauli_generator(const LindbladSpec& spec) {
  spec.validate();
  const int n = spec.n();
  check_dim(n, kStateGuard, "pauli_generator");
  const double f = rate_factor(spec.convention);
  std::vector<OperatorSum> L, Ld, LdL;
  for (auto& g : spec.generators) {
    L.push_back(g.effective());
    Ld.push_back(L.back().dagger());
    LdL.push_back(Ld.back() * L.back());
  }
  const std::uint64_t N = 1ULL << (2 * n);
  std::vector<Eigen::Triplet<double>> trip;
  double max_imag = 0.0;
  for (std::uint64_t b = 0; b < N; ++b) {
    const OperatorSum P = OperatorSum::pauli(n, ops::pauli_from_index(b, n));
    OperatorSum out = ops::commutator(spec.hamiltonian, P) * (-kI);
    for (std::size_t k = 0; k < L.size(); ++k)
      out = out + (L[k] * P * Ld[k]) * cplx(f) - ops::anticommutator(LdL[k], P) * cplx(0.5 * f);
    for (auto& t : out.terms()) {
      max_imag = std::max(max_imag, std::abs(t.coefficient.imag()));
      if (std::abs(t.coefficient.real()) > 1e-15)
        trip.emplace_back(static_cast<int>(ops::pauli_index(t.letters, n)), static_cast<int>(b), t.coefficient.real());
    }
  }
  if (max_imag > 1e-10) throw std::logic_error("pauli_generator: generator is not Hermiticity preserving");
  Eigen::SparseMatrix<double> G(N, N);
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

std::vector<cplx> liouvillian_eigenvalues(const LindbladSpec& spec) {
  const auto G = pauli_generator(spec);
  std::vector<cplx> out;
  for (auto& idx : blocks_of(G)) {
    auto ev = real_eigenvalues(dense_block(G, idx));
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

double spectral_gap(const LindbladSpec& spec, double zero_tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (auto& z : liouvillian_eigenvalues(spec))
    if (std::abs(z) > zero_tol) best = std::max(best, z.real());
  return -best;
}

DensityMatrix evolve(const LindbladSpec& spec, const Mat& rho0, double t) {
  check_dim(spec.n(), kStateGuard, "evolve");
  if (t < 0) throw std::invalid_argument("evolve: t >= 0");
  DensityMatrix out{rho0, spec.convention};
  if (t == 0) return out;
  const int d = 1 << spec.n();
  if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("evolve: state dimension");
  if (spec.n() <= 4) {
    const Mat S = build_liouvillian(spec) * cplx(t);
    out.data = unvec(S.exp() * vec(rho0), d);
    return out;
  }
  // Larger n: Taylor series on the dense right-hand side with step splitting.
  DenseSpec ds(spec);
  double scale = 2.0 * ops::norm_bound(spec.hamiltonian);
  for (auto& g : spec.generators) scale += 2.0 * ds.f * std::pow(ops::norm_bound(g.effective()), 2);
  const int steps = std::max(1, static_cast<int>(std::ceil(scale * t / 0.5)));
  const double h = t / steps;
  Mat rho = rho0;
  for (int s = 0; s < steps; ++s) {
    Mat term = rho, acc = rho;
    for (int k = 1; k < 60; ++k) {
      term = ds.rhs(term) * cplx(h / k);
      acc += term;
      if (term.norm() < 1e-17 * acc.norm()) break;
    }
    rho = acc;
  }
  out.data = rho;
  return out;
}

DensityMatrix steady_state(const LindbladSpec& spec) {
  const int n = spec.n();
  check_dim(n, kStateGuard, "steady_state");
  const auto G = pauli_generator(spec);
  std::vector<double> r(G.rows(), 0.0);
  for (auto& idx : blocks_of(G)) {
    RealMat B = dense_block(G, idx);
    const bool has_identity = idx.front() == 0;  // indices are sorted, identity is index 0
    if (has_identity) {
      RealMat A = B;
      A.row(0).setZero();
      A(0, 0) = 1.0;  // r_I = 1 fixes the trace
      Eigen::PartialPivLU<RealMat> lu(A);
      if (lu.rcond() < 1e-13) throw DegenerateSteadyState(nullity(B));
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
      rhs(0) = 1.0;
      Eigen::VectorXd x = lu.solve(rhs);
      for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = x(k);
    } else {
      Eigen::PartialPivLU<RealMat> lu(B);
      if (lu.rcond() < 1e-13) {
        const int extra = nullity(B);
        if (extra > 0) throw DegenerateSteadyState(1 + extra);
      }
    }
  }
  std::vector<PauliTerm> terms;
  const double norm = std::ldexp(1.0, -n);
  for (std::size_t a = 0; a < r.size(); ++a)
    if (r[a] != 0.0) terms.push_back({r[a] * norm, ops::pauli_from_index(a, n)});
  return {ops::to_dense(OperatorSum(n, terms)), spec.convention};
}

DensityMatrix steady_state_charge_sector(const LindbladSpec& spec, const std::vector<std::uint64_t>& masks) {
  spec.validate();
  const int n = spec.n();
  check_dim(n, 10, "steady_state_charge_sector");
  const int dim = 1 << n;
  const double f = rate_factor(spec.convention);
  auto same_charge = [&](int a, int b) {
    for (auto m : masks)
      if (std::popcount(static_cast<std::uint64_t>(a) & m) != std::popcount(static_cast<std::uint64_t>(b) & m))
        return false;
    return true;
  };
  std::vector<int> index(static_cast<std::size_t>(dim) * dim, -1);
  std::vector<std::pair<int, int>> pairs;
  for (int b = 0; b < dim; ++b)
    for (int a = 0; a < dim; ++a)
      if (same_charge(a, b)) {
        index[static_cast<std::size_t>(b) * dim + a] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, b);
      }
  auto at = [&](int i, int j) {
    int k = index[static_cast<std::size_t>(j) * dim + i];
    if (k < 0) throw std::invalid_argument("steady_state_charge_sector: spec does not respect the charges");
    return k;
  };

  using SpC = Eigen::SparseMatrix<cplx>;
  const SpC H = ops::to_sparse(spec.hamiltonian);
  std::vector<SpC> L, LdL;
  for (auto& g : spec.generators) {
    L.push_back(ops::to_sparse(g.effective()));
    LdL.push_back(SpC(L.back().adjoint() * L.back()));
  }
  const int row0 = at(0, 0);
  std::vector<Eigen::Triplet<cplx>> trip;
  auto add = [&](int i, int j, int col, cplx v) {
    int row = at(i, j);
    if (row != row0) trip.emplace_back(row, col, v);
  };
  for (int c = 0; c < static_cast<int>(pairs.size()); ++c) {
    const auto [a, b] = pairs[c];
    for (SpC::InnerIterator it(H, a); it; ++it) add(static_cast<int>(it.row()), b, c, -kI * it.value());
    for (SpC::InnerIterator it(H, b); it; ++it) add(a, static_cast<int>(it.row()), c, kI * std::conj(it.value()));
    for (std::size_t k = 0; k < L.size(); ++k) {
      for (SpC::InnerIterator ia(L[k], a); ia; ++ia)
        for (SpC::InnerIterator jb(L[k], b); jb; ++jb)
          add(static_cast<int>(ia.row()), static_cast<int>(jb.row()), c, f * ia.value() * std::conj(jb.value()));
      for (SpC::InnerIterator it(LdL[k], a); it; ++it) add(static_cast<int>(it.row()), b, c, -0.5 * f * it.value());
      for (SpC::InnerIterator it(LdL[k], b); it; ++it)
        add(a, static_cast<int>(it.row()), c, -0.5 * f * std::conj(it.value()));
    }
  }
  for (int a = 0; a < dim; ++a) trip.emplace_back(row0, at(a, a), 1.0);
  const int N = static_cast<int>(pairs.size());
  SpC A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
  rhs(row0) = 1.0;
  // preconditioned iteration first, exact LU when it stalls
  Eigen::BiCGSTAB<SpC, Eigen::IncompleteLUT<cplx>> it;
  it.preconditioner().setDroptol(1e-6);
  it.setTolerance(1e-14);
  it.setMaxIterations(2000);
  it.compute(A);
  Eigen::VectorXcd x;
  if (it.info() == Eigen::Success) x = it.solve(rhs);
  if (it.info() != Eigen::Success || (A * x - rhs).norm() > 1e-11) {
    Eigen::SparseLU<SpC> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw DegenerateSteadyState(2);
    x = lu.solve(rhs);
  }
  if ((A * x - rhs).norm() > 1e-8) throw DegenerateSteadyState(2);
  Mat rho = Mat::Zero(dim, dim);
  for (int c = 0; c < N; ++c) rho(pairs[c].first, pairs[c].second) = x(c);
  return {rho, spec.convention};
}

Mat DilationBlocks::assembled() const {
  const Eigen::Index d = L.rows();
  Mat U(2 * d, 2 * d);
  U << L, R, M, D;
  return U;
}

double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const Mat& m) {
  if (m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-13 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

DilationBlocks dilation(const Mat& L) {
  if (L.rows() != L.cols()) throw std::invalid_argument("dilation: square L required");
  if (spectral_norm(L) > 1.0 + 1e-12) throw std::domain_error("dilation: spectral norm of L exceeds 1");
  const Mat Id = Mat::Identity(L.rows(), L.cols());
  DilationBlocks b;
  b.L = L;
  b.R = sqrt_psd(Id - L * L.adjoint());
  b.M = sqrt_psd(Id - L.adjoint() * L);
  b.D = -L.adjoint();
  return b;
}

QuantumChannel::QuantumChannel(Mat superop) : s_(std::move(superop)) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s_.rows()))));
  if (s_.rows() != s_.cols() || Eigen::Index(d) * d != s_.rows())
    throw std::invalid_argument("QuantumChannel: superoperator must be d^2 x d^2");
  dim_ = d;
}

QuantumChannel QuantumChannel::identity(int dim) { return QuantumChannel(Mat::Identity(dim * dim, dim * dim)); }

QuantumChannel QuantumChannel::from_kraus(const std::vector<Mat>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: empty Kraus set");
  const Eigen::Index d = kraus.front().rows();
  Mat S = Mat::Zero(d * d, d * d);
  for (auto& K : kraus) add_kron(S, K.conjugate(), K, 1.0);
  return QuantumChannel(std::move(S));
}

QuantumChannel QuantumChannel::exp_generator(const Mat& superop, double t) {
  return QuantumChannel(Mat(superop * cplx(t)).exp());
}

QuantumChannel QuantumChannel::unitary(const Mat& U) { return from_kraus({U}); }

Mat QuantumChannel::apply(const Mat& rho) const { return unvec(s_ * vec(rho), dim_); }

Mat QuantumChannel::choi() const {
  const int d = dim_;
  Mat J = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) J.block(i * d, j * d, d, d) = unvec(s_.col(j * d + i), d);
  return J;
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next) const {
  if (next.dim_ != dim_) throw std::invalid_argument("QuantumChannel::then: dimension mismatch");
  return QuantumChannel(next.s_ * s_);
}

WeakChannel weak_channel(const Mat& L, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::domain_error("weak_channel: delta in [0, 1]");
  const DilationBlocks b = dilation(L);
  const Mat Id = Mat::Identity(L.rows(), L.cols());
  const double c = std::sqrt(1.0 - delta) - 1.0;
  WeakChannel w;
  w.kraus = {Id + c * (L.adjoint() * L), std::sqrt(delta) * L, c * (b.R.adjoint() * L)};
  Mat sum = Mat::Zero(L.rows(), L.cols());
  for (auto& K : w.kraus) sum += K.adjoint() * K;
  w.completeness_error = (sum - Id).cwiseAbs().maxCoeff();
  w.channel = QuantumChannel::from_kraus(w.kraus);
  return w;
}

Mat weak_channel_closed_form(const Mat& L, double delta, const Mat& rho) {
  const DilationBlocks b = dilation(L);
  const double c = std::sqrt(1.0 - delta) - 1.0;
  const Mat A = L.adjoint() * L;
  const Mat RL = b.R.adjoint() * L;
  return rho + delta * L * rho * L.adjoint() + c * (A * rho + rho * A) +
         c * c * (A * rho * A + RL * rho * RL.adjoint());
}

Mat random_density_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = {g(rng), g(rng)};
  Mat rho = G * G.adjoint();
  return rho / rho.trace();
}

Mat random_contraction(int dim, std::mt19937_64& rng, double max_norm) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Mat G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = {g(rng), g(rng)};
  return G * (max_norm * u(rng) / spectral_norm(G));
}

ChannelDistance channel_distance(const QuantumChannel& a, const QuantumChannel& b, int n_states, std::uint64_t seed) {
  if (a.dim() != b.dim()) throw std::invalid_argument("channel_distance: dimension mismatch");
  ChannelDistance out;
  std::mt19937_64 rng(seed);
  const Mat diff = a.superop() - b.superop();
  for (int k = 0; k < n_states; ++k) {
    const Mat rho = random_density_matrix(a.dim(), rng);
    out.max_trace_distance = std::max(out.max_trace_distance, trace_norm(unvec(diff * vec(rho), a.dim())));
  }
  out.choi_trace_norm = trace_norm(a.choi() - b.choi()) / a.dim();
  return out;
}

std::vector<std::vector<int>> disjoint_support_groups(const LindbladSpec& spec) {
  std::vector<std::vector<int>> groups;
  std::vector<std::set<std::uint32_t>> used;
  for (int k = 0; k < static_cast<int>(spec.generators.size()); ++k) {
    std::set<std::uint32_t> support;
    for (auto& t : spec.generators[k].op.terms())
      for (auto& [q, l] : t.letters.letters) support.insert(q);
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      bool disjoint = std::none_of(support.begin(), support.end(), [&](auto q) { return used[g].count(q) > 0; });
      if (disjoint) {
        groups[g].push_back(k);
        used[g].insert(support.begin(), support.end());
        placed = true;
      }
    }
    if (!placed) {
      groups.push_back({k});
      used.push_back(support);
    }
  }
  return groups;
}

TrotterCheck verify_trotter_bound(const LindbladSpec& spec, double delta, const std::vector<std::vector<int>>& groups,
                                  int n_states, std::uint64_t seed) {
  check_dim(spec.n(), 4, "verify_trotter_bound");
  if (spec.convention != RateConvention::half)
    throw std::invalid_argument("verify_trotter_bound: spec must use the half convention");
  DenseSpec ds(spec);
  const int d = ds.dim;
  std::vector<int> seen(ds.L.size(), 0);
  for (auto& g : groups)
    for (int k : g) {
      if (k < 0 || k >= static_cast<int>(ds.L.size())) throw std::invalid_argument("grouping: bad index");
      ++seen[k];
    }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw std::invalid_argument("grouping must cover every generator once");

  const QuantumChannel exact = QuantumChannel::exp_generator(build_liouvillian(spec), delta);
  QuantumChannel prod_exact = QuantumChannel::identity(d), prod_weak = QuantumChannel::identity(d);
  double sum_2mL = 0, sum_sq_L = 0, sum_2H = 0, sum_sq_H = 0;
  for (auto& g : groups) {
    Mat D = Mat::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
    double s = 0;
    for (int k : g) {
      D += dissipator_superop(ds.L[k], 1.0);
      s += 2.0 * spectral_norm(ds.L[k]);
      prod_weak = prod_weak.then(weak_channel(ds.L[k], delta).channel);
    }
    prod_exact = prod_exact.then(QuantumChannel::exp_generator(D, delta));
    sum_2mL += s;
    sum_sq_L += s * s;
  }
  for (auto& t : spec.hamiltonian.terms()) {
    if (t.letters.is_identity()) continue;
    const Mat P = ops::pauli_dense(t.letters, spec.n());
    const Mat U = Mat(-kI * delta * t.coefficient * P).exp();
    const QuantumChannel step = QuantumChannel::unitary(U);
    prod_exact = prod_exact.then(step);
    prod_weak = prod_weak.then(step);
    sum_2H += 2.0 * std::abs(t.coefficient);
    sum_sq_H += 4.0 * std::norm(t.coefficient);
  }
  TrotterCheck c;
  auto dist = [&](const QuantumChannel& q) {
    auto cd = channel_distance(exact, q, n_states, seed);
    return std::max(cd.max_trace_distance, cd.choi_trace_norm);
  };
  c.lhs_exact = dist(prod_exact);
  c.lhs_weak = dist(prod_weak);
  c.rhs = evolution::trotter_error_bound(sum_2mL, sum_2H, sum_sq_L, sum_sq_H, delta);
  c.weak_allowance = 5.0 * delta * delta * static_cast<double>(ds.L.size());
  c.pass = c.lhs_exact <= c.rhs && c.lhs_weak <= c.rhs + c.weak_allowance;
  return c;
}

OperatorSum ChainModel::hamiltonian() const {
  std::vector<PauliTerm> terms;
  for (int m = 0; m + 1 < n; ++m)
    terms.push_back({J, PauliString({{std::uint32_t(m), Letter::Z}, {std::uint32_t(m + 1), Letter::Z}})});
  for (int m = 0; m < n; ++m) terms.push_back({h, PauliString::single(m, Letter::X)});
  return OperatorSum(n, terms);
}

OperatorSum ChainModel::bond_term(int m) const {
  if (m < 0 || m + 1 >= n) throw std::out_of_range("bond_term");
  const double wl = m == 0 ? 1.0 : 0.5, wr = m + 1 == n - 1 ? 1.0 : 0.5;
  return OperatorSum(n, {{J, PauliString({{std::uint32_t(m), Letter::Z}, {std::uint32_t(m + 1), Letter::Z}})},
                         {h * wl, PauliString::single(m, Letter::X)},
                         {h * wr, PauliString::single(m + 1, Letter::X)}});
}

OperatorSum spin_current_operator(const ChainModel& chain, int m) {
  const OperatorSum Hm = chain.bond_term(m);
  const OperatorSum a = OperatorSum::single(chain.n, m, Letter::X);
  const OperatorSum b = OperatorSum::single(chain.n, m + 1, Letter::X);
  return (ops::commutator(a, Hm) - ops::commutator(b, Hm)) * cplx(0.0, 0.5);
}

OperatorSum ChainModel::site_term(int m) const {
  if (m < 0 || m >= n) throw std::out_of_range("site_term");
  std::vector<PauliTerm> terms{{h, PauliString::single(m, Letter::X)}};
  if (m > 0)
    terms.push_back({0.5 * J, PauliString({{std::uint32_t(m - 1), Letter::Z}, {std::uint32_t(m), Letter::Z}})});
  if (m + 1 < n)
    terms.push_back({0.5 * J, PauliString({{std::uint32_t(m), Letter::Z}, {std::uint32_t(m + 1), Letter::Z}})});
  return OperatorSum(n, terms);
}

OperatorSum energy_current_operator(const ChainModel& chain, int m) {
  return ops::commutator(chain.site_term(m), chain.site_term(m + 1)) * kI;
}

CurrentProfile measure_currents(const ChainModel& chain, const Mat& rho) {
  CurrentProfile p;
  for (int m = 0; m + 1 < chain.n; ++m) {
    const cplx s = ops::expectation(spin_current_operator(chain, m), rho);
    p.max_imag = std::max(p.max_imag, std::abs(s.imag()));
    p.spin.push_back(s.real());
  }
  for (int m = 0; m + 1 < chain.n; ++m) {
    const cplx q = ops::expectation(energy_current_operator(chain, m), rho);
    p.max_imag = std::max(p.max_imag, std::abs(q.imag()));
    p.energy.push_back(q.real());
  }
  if (!p.spin.empty()) p.spin_avg = std::accumulate(p.spin.begin(), p.spin.end(), 0.0) / p.spin.size();
  if (!p.energy.empty()) p.energy_avg = std::accumulate(p.energy.begin(), p.energy.end(), 0.0) / p.energy.size();
  return p;
}

namespace {
OperatorSum projector(int n, int site, int spin) {
  // spin +1 is |0>
  return (OperatorSum::identity(n) + OperatorSum::single(n, site, Letter::Z, double(spin))) * cplx(0.5);
}

OperatorSum ladder(int n, int site, bool lower) {
  // lower: |0><1| = (X + iY)/2
  return (OperatorSum::single(n, site, Letter::X) + OperatorSum::single(n, site, Letter::Y, lower ? kI : -kI)) *
         cplx(0.5);
}
}  // namespace

CaGenerators ca_lindblad_generators(const models::CaPatch& patch, double beta, AmplitudeMode mode, double h_long) {
  const int n = patch.n;
  if (n < 1 || n > kStateGuard) throw std::invalid_argument("ca_lindblad_generators: patch size 1..7");
  if (beta < 0) throw std::invalid_argument("ca_lindblad_generators: beta >= 0");
  CaGenerators out;
  for (int i = 0; i < n; ++i) {
    struct Nb {
      int site;
      double J;
      int group;
    };
    std::vector<Nb> nb;
    for (auto& b : patch.bonds) {
      if (b.a == i) nb.push_back({b.b, b.J, b.group});
      if (b.b == i) nb.push_back({b.a, b.J, b.group});
    }
    if (nb.size() > 16) throw std::invalid_argument("ca_lindblad_generators: geometry unsupported");
    for (bool lower : {true, false}) {
      const int s_before = lower ? -1 : 1;  // lowering |1> -> |0> raises the spin
      std::map<std::pair<int, int>, std::pair<double, OperatorSum>> classes;
      for (unsigned c = 0; c < (1U << nb.size()); ++c) {
        double hloc = h_long;
        int s1 = 0, s2 = 0;
        OperatorSum proj = OperatorSum::identity(n);
        for (std::size_t k = 0; k < nb.size(); ++k) {
          const int s = ((c >> k) & 1U) ? -1 : 1;
          hloc += nb[k].J * s;
          (nb[k].group == 0 ? s1 : s2) += s;
          proj = proj * projector(n, nb[k].site, s);
        }
        const double dE = -2.0 * s_before * hloc;
        auto [it, fresh] = classes.try_emplace({s1, s2}, dE, OperatorSum(n));
        it->second.second = it->second.second + proj;
      }
      out.classes_per_spin_max = std::max(out.classes_per_spin_max, static_cast<int>(classes.size()));
      OperatorSum joined(n);
      for (auto& [key, v] : classes) {
        auto& [dE, proj] = v;
        if (dE <= 0) {
          joined = joined + proj;
          continue;
        }
        const double rate = std::exp(-beta * dE);
        const double amp = mode == AmplitudeMode::simulation ? std::sqrt(rate) : rate;
        out.generators.push_back({amp, ladder(n, i, lower) * proj});
        out.rates.push_back(rate);
      }
      if (!joined.empty()) {
        out.generators.push_back({1.0, ladder(n, i, lower) * joined});
        out.rates.push_back(1.0);
      }
    }
  }
  return out;
}

RealMat classical_rate_matrix(const std::vector<Generator>& gens, int n) {
  const int d = 1 << n;
  RealMat W = RealMat::Zero(d, d);
  for (auto& g : gens) {
    const Mat L = ops::to_dense(g.effective());
    for (int c = 0; c < d; ++c)
      for (int c2 = 0; c2 < d; ++c2)
        if (c2 != c) W(c2, c) += std::norm(L(c2, c));
  }
  for (int c = 0; c < d; ++c) W(c, c) = -W.col(c).sum();
  return W;
}

Eigen::VectorXd gibbs_distribution(const models::CaPatch& patch, double beta, double h_long) {
  const int d = 1 << patch.n;
  Eigen::VectorXd p(d);
  for (int c = 0; c < d; ++c) p(c) = std::exp(-beta * patch.energy(static_cast<unsigned>(c), h_long));
  return p / p.sum();
}

Eigen::VectorXd stationary_distribution(const RealMat& W) {
  RealMat A = W;
  A.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
  rhs(0) = 1.0;
  return A.fullPivLu().solve(rhs);
}

std::vector<Generator> hubbard_landauer_generators(const models::HubbardLattice& lat, double amplitude) {
  std::vector<Generator> out;
  for (auto& e : lat.left_edge())
    for (int s = 0; s < 2; ++s)
      out.push_back({amplitude, ops::jordan_wigner({ops::cann(lat.mode(e[0], e[1], s))}, lat.modes())});
  for (auto& e : lat.right_edge())
    for (int s = 0; s < 2; ++s)
      out.push_back({amplitude, ops::jordan_wigner({ops::cdag(lat.mode(e[0], e[1], s))}, lat.modes())});
  return out;
}

LindbladSpec hubbard_landauer_spec(const models::HubbardLattice& lat, double amplitude) {
  return {lat.hamiltonian(), hubbard_landauer_generators(lat, amplitude), RateConvention::doubled};
}

}  // namespace qlre::lindblad
