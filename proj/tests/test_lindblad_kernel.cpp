#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "dense_oracle.hpp"
#include "qlre/benchmark_factory.hpp"
#include "qlre/evolution_estimator.hpp"
#include "qlre/json_io.hpp"
#include "qlre/lindblad_kernel.hpp"

using namespace qlre::lindblad;
using qlre::ops::Letter;
using qlre::ops::PauliString;
using qlre::ops::PauliTerm;

namespace {
const cplx kI{0.0, 1.0};

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

OperatorSum lower(int n, int q) {
  return (OperatorSum::single(n, q, Letter::X) + OperatorSum::single(n, q, Letter::Y, kI)) * cplx(0.5);
}

LindbladSpec damping(RateConvention c) {
  return {OperatorSum(1), {{1.0, lower(1, 0)}}, c};
}

OperatorSum random_local_op(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<PauliTerm> terms;
  for (int q = 0; q < n; ++q)
    for (Letter l : {Letter::X, Letter::Y, Letter::Z}) terms.push_back({cplx(g(rng), g(rng)), PauliString::single(q, l)});
  if (n > 1) terms.push_back({cplx(g(rng), 0), PauliString({{0, Letter::Z}, {1, Letter::X}})});
  return OperatorSum(n, terms);
}

LindbladSpec random_spec(int n, std::uint64_t seed, RateConvention c) {
  std::mt19937_64 rng(seed);
  OperatorSum h = random_local_op(n, rng);
  h = (h + h.dagger()) * cplx(0.5);
  LindbladSpec s{h, {}, c};
  for (int k = 0; k < 3; ++k) s.generators.push_back({cplx(0.4, 0.1 * k), random_local_op(n, rng)});
  return s;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST(Liouvillian, MatchesDirectRhs) {
  for (auto conv : {RateConvention::doubled, RateConvention::half}) {
    for (int n : {1, 2, 3}) {
      const auto spec = random_spec(n, 100 + n, conv);
      const Mat S = build_liouvillian(spec);
      std::mt19937_64 rng(9);
      for (int k = 0; k < 20; ++k) {
        const Mat rho = random_density_matrix(1 << n, rng);
        ASSERT_LT(max_abs(unvec(S * vec(rho), 1 << n) - apply_rhs(spec, rho)), 1e-11);
      }
    }
  }
}

TEST(Liouvillian, RhsAgainstHandWrittenFormula) {
  const auto spec = random_spec(2, 5, RateConvention::doubled);
  const Mat H = qlre::ops::to_dense(spec.hamiltonian);
  std::mt19937_64 rng(3);
  const Mat rho = random_density_matrix(4, rng);
  Mat want = -kI * (H * rho - rho * H);
  for (auto& g : spec.generators) {
    const Mat L = qlre::ops::to_dense(g.effective());
    want += 2.0 * L * rho * L.adjoint() - L.adjoint() * L * rho - rho * L.adjoint() * L;
  }
  EXPECT_LT(max_abs(apply_rhs(spec, rho) - want), 1e-12);
}

TEST(Liouvillian, DampingRatesPerConvention) {
  Mat one = Mat::Zero(2, 2);
  one(1, 1) = 1;
  EXPECT_NEAR(apply_rhs(damping(RateConvention::doubled), one)(1, 1).real(), -2.0, 1e-14);
  EXPECT_NEAR(apply_rhs(damping(RateConvention::half), one)(1, 1).real(), -1.0, 1e-14);
  EXPECT_EQ(rate_factor(RateConvention::doubled), 2.0);
  EXPECT_EQ(convention_from_string("half"), RateConvention::half);
  EXPECT_THROW(convention_from_string("quarter"), std::invalid_argument);
}

TEST(Liouvillian, UnitaryOnlySpectrumIsImaginary) {
  auto spec = random_spec(2, 17, RateConvention::doubled);
  spec.generators.clear();
  for (auto z : liouvillian_eigenvalues(spec)) ASSERT_LT(std::abs(z.real()), 1e-10);
}

TEST(Liouvillian, PauliGeneratorAgreesWithSuperoperator) {
  const auto spec = random_spec(2, 23, RateConvention::doubled);
  const Mat S = build_liouvillian(spec);
  const Eigen::MatrixXd G(pauli_generator(spec));
  // compare through the action on each Pauli basis element
  for (int a = 0; a < 16; ++a) {
    const Mat P = qlre::ops::pauli_dense(qlre::ops::pauli_from_index(a, 2), 2);
    const Mat out = unvec(S * vec(P), 4);
    for (int b = 0; b < 16; ++b) {
      const Mat Q = qlre::ops::pauli_dense(qlre::ops::pauli_from_index(b, 2), 2);
      const double coef = (Q * out).trace().real() / 4.0;
      ASSERT_NEAR(G(b, a), coef, 1e-12);
    }
  }
}

TEST(Evolve, ZeroTimeAndValidity) {
  const auto spec = random_spec(3, 41, RateConvention::doubled);
  std::mt19937_64 rng(2);
  const Mat rho0 = random_density_matrix(8, rng);
  EXPECT_EQ(evolve(spec, rho0, 0).data, rho0);
  const auto r = evolve(spec, rho0, 0.7);
  EXPECT_TRUE(r.valid());
  // Taylor path (n > 4) agrees with the matrix exponential on a padded spec
  auto big = random_spec(5, 43, RateConvention::doubled);
  const Mat rho5 = random_density_matrix(32, rng);
  const Mat S = build_liouvillian(big);
  const Mat want = unvec(Mat(S * cplx(0.3)).exp() * vec(rho5), 32);
  EXPECT_LT(max_abs(evolve(big, rho5, 0.3).data - want), 1e-10);
}

TEST(SteadyState, AmplitudeDamping) {
  for (auto c : {RateConvention::doubled, RateConvention::half}) {
    const auto ss = steady_state(damping(c));
    EXPECT_NEAR(std::abs(ss.data(0, 0) - 1.0), 0.0, 1e-12);
    EXPECT_LT(max_abs(ss.data) - 1.0, 1e-12);
    EXPECT_NEAR(std::abs(ss.data(1, 1)), 0.0, 1e-12);
  }
}

TEST(SteadyState, ProsenResidual) {
  qlre::bench::ProsenParams p;
  p.n = 4;
  const auto spec = qlre::bench::prosen_instance(p);
  const auto ss = steady_state(spec);
  EXPECT_LE(apply_rhs(spec, ss.data).norm(), 1e-10);
  EXPECT_TRUE(ss.valid());
}

TEST(SteadyState, DegenerateIsReported) {
  // no dissipation: every diagonal state is stationary
  LindbladSpec s{OperatorSum::single(2, 0, Letter::Z), {}, RateConvention::doubled};
  EXPECT_THROW(steady_state(s), DegenerateSteadyState);
}

TEST(Dilation, Blocks) {
  const auto z = dilation(Mat::Zero(2, 2));
  Mat swap = Mat::Zero(4, 4);
  swap.topRightCorner(2, 2) = Mat::Identity(2, 2);
  swap.bottomLeftCorner(2, 2) = Mat::Identity(2, 2);
  EXPECT_LT(max_abs(z.assembled() - swap), 1e-15);

  auto check = [](const Mat& L) {
    const auto b = dilation(L);
    const Mat U = b.assembled();
    const Mat Id = Mat::Identity(U.rows(), U.cols());
    const Mat id = Mat::Identity(L.rows(), L.cols());
    EXPECT_LT(max_abs(U.adjoint() * U - Id), 1e-12);
    EXPECT_LT(max_abs(b.L.adjoint() * b.L + b.M.adjoint() * b.M - id), 1e-12);
    EXPECT_LT(max_abs(b.R.adjoint() * b.L + b.D.adjoint() * b.M), 1e-12);
  };
  check(sigma_minus());
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) check(random_contraction(2 + k % 7, rng));
  EXPECT_THROW(dilation(2.0 * Mat::Identity(2, 2)), std::domain_error);
}

TEST(WeakChannel, Endpoints) {
  std::mt19937_64 rng(4);
  const Mat L = random_contraction(4, rng);
  const auto id = weak_channel(L, 0.0);
  EXPECT_LT(max_abs(id.channel.superop() - Mat::Identity(16, 16)), 1e-14);

  Mat one = Mat::Zero(2, 2);
  one(1, 1) = 1;
  const auto w = weak_channel(sigma_minus(), 1.0);
  EXPECT_NEAR(w.channel.apply(one)(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(weak_channel_closed_form(sigma_minus(), 1.0, one)(0, 0).real(), 1.0, 1e-14);
  EXPECT_THROW(weak_channel(L, 1.5), std::domain_error);
}

TEST(WeakChannel, CompletenessAndClosedForm) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 << (k % 3);
    const Mat L = random_contraction(d, rng);
    const double delta = u(rng);
    const auto w = weak_channel(L, delta);
    ASSERT_LE(w.completeness_error, 1e-12);
    const Mat rho = random_density_matrix(d, rng);
    ASSERT_LT(max_abs(w.channel.apply(rho) - weak_channel_closed_form(L, delta, rho)), 1e-12);
  }
}

TEST(WeakChannel, FiveDeltaSquared) {
  std::mt19937_64 rng(21);
  for (double delta : {0.5, 0.1, 0.01}) {
    for (int nq = 1; nq <= 3; ++nq) {
      const int d = 1 << nq;
      const Mat L = random_contraction(d, rng);
      const Mat D = dissipator_superop(L, 1.0);
      const auto cd = channel_distance(weak_channel(L, delta).channel, QuantumChannel::exp_generator(D, delta), 30);
      ASSERT_LE(cd.max_trace_distance, 5 * delta * delta) << delta << " " << nq;
    }
  }
}

TEST(ChannelDistance, SelfIsZero) {
  std::mt19937_64 rng(1);
  const auto w = weak_channel(random_contraction(4, rng), 0.3).channel;
  const auto cd = channel_distance(w, w, 10);
  EXPECT_EQ(cd.max_trace_distance, 0.0);
  EXPECT_EQ(cd.choi_trace_norm, 0.0);
  EXPECT_THROW(channel_distance(w, QuantumChannel::identity(2), 1), std::invalid_argument);
}

TEST(TrotterBound, CommutingGeneratorsExact) {
  LindbladSpec s{OperatorSum(2), {{1.0, lower(2, 0)}, {0.5, lower(2, 1)}}, RateConvention::half};
  const auto groups = disjoint_support_groups(s);
  ASSERT_EQ(groups.size(), 1u);
  const auto c = verify_trotter_bound(s, 1e-2, groups);
  EXPECT_LT(c.lhs_exact, 1e-13);
  EXPECT_TRUE(c.pass);
  EXPECT_THROW(verify_trotter_bound(random_spec(2, 1, RateConvention::doubled), 1e-2, {{0, 1, 2}}),
               std::invalid_argument);
}

TEST(TrotterBound, RandomSpecPasses) {
  auto s = random_spec(3, 77, RateConvention::half);
  for (auto& g : s.generators) g.amplitude /= qlre::ops::norm_bound(g.effective());
  for (double delta : {1e-2, 1e-3}) {
    const auto c = verify_trotter_bound(s, delta, disjoint_support_groups(s));
    EXPECT_TRUE(c.pass) << delta << " lhs " << c.lhs_exact << " rhs " << c.rhs;
  }
}

TEST(Currents, MaximallyMixedIsZero) {
  ChainModel chain{5};
  const Mat rho = Mat::Identity(32, 32) / 32.0;
  const auto p = measure_currents(chain, rho);
  ASSERT_EQ(p.spin.size(), 4u);
  ASSERT_EQ(p.energy.size(), 4u);
  for (double s : p.spin) EXPECT_NEAR(s, 0.0, 1e-15);
  for (double q : p.energy) EXPECT_NEAR(q, 0.0, 1e-15);
}

TEST(Currents, OperatorsAreHermitian) {
  ChainModel chain{4};
  for (int m = 0; m < 3; ++m) {
    EXPECT_TRUE(spin_current_operator(chain, m).is_hermitian());
    EXPECT_TRUE(energy_current_operator(chain, m).is_hermitian());
  }
}

TEST(Currents, ProsenNessFrozenValues) {
  // dense numpy fixtures from tests/oracles/prosen_oracle.py
  const std::vector<std::pair<int, double>> spin_avg{{3, -0.090875062209}, {4, -0.092247296099}, {5, -0.093006626270}};
  for (auto [n, want] : spin_avg) {
    qlre::bench::ProsenParams p;
    p.n = n;
    const auto ss = steady_state(qlre::bench::prosen_instance(p));
    const auto prof = measure_currents(p.chain(), ss.data);
    EXPECT_NEAR(prof.spin_avg, want, 1e-9) << n;
    EXPECT_LE(prof.max_imag, 1e-10);
    // interior bonds 1..n-3; the end bonds carry the full boundary field
    for (int m = 1; m + 3 < n; ++m) {
      EXPECT_NEAR(prof.spin[m], prof.spin[m + 1], 1e-8);
      EXPECT_NEAR(prof.energy[m], prof.energy[m + 1], 1e-8);
    }
  }
}

TEST(CaGenerators, InfiniteTemperatureIsUniform) {
  const auto patch = qlre::models::CaPatch::chain(qlre::models::CaLattice{}, 4);
  const auto g = ca_lindblad_generators(patch, 0.0, AmplitudeMode::simulation);
  for (double r : g.rates) EXPECT_EQ(r, 1.0);
  const auto pi = stationary_distribution(classical_rate_matrix(g.generators, 4));
  for (int c = 0; c < 16; ++c) EXPECT_NEAR(pi(c), 1.0 / 16, 1e-12);
}

TEST(CaGenerators, RateClassCount) {
  EXPECT_EQ(qlre::models::CaLattice{}.rate_class_count(), 39);
}

TEST(CaGenerators, DetailedBalanceGivesGibbs) {
  const qlre::models::CaLattice lat;
  for (int len : {3, 4, 5}) {
    const auto patch = qlre::models::CaPatch::chain(lat, len);
    const auto g = ca_lindblad_generators(patch, 1.0, AmplitudeMode::simulation);
    const auto pi = stationary_distribution(classical_rate_matrix(g.generators, len));
    const auto gibbs = gibbs_distribution(patch, 1.0);
    EXPECT_LT((pi - gibbs).cwiseAbs().maxCoeff(), 1e-8) << len;
  }
  EXPECT_THROW(ca_lindblad_generators(qlre::models::CaPatch::chain(lat, 8), 1.0, AmplitudeMode::cost),
               std::invalid_argument);
}

TEST(CaGenerators, CostModeUsesRateAsAmplitude) {
  const auto patch = qlre::models::CaPatch::chain(qlre::models::CaLattice{}, 3);
  const auto sim = ca_lindblad_generators(patch, 0.7, AmplitudeMode::simulation);
  const auto cost = ca_lindblad_generators(patch, 0.7, AmplitudeMode::cost);
  ASSERT_EQ(sim.generators.size(), cost.generators.size());
  for (std::size_t k = 0; k < sim.rates.size(); ++k) {
    EXPECT_NEAR(std::abs(sim.generators[k].amplitude), std::sqrt(sim.rates[k]), 1e-15);
    EXPECT_NEAR(std::abs(cost.generators[k].amplitude), cost.rates[k], 1e-15);
  }
}

TEST(CaSchedule, Defaults) {
  const auto s = qlre::models::CaSchedule::defaults();
  ASSERT_EQ(s.steps(), 10);
  EXPECT_NEAR(s.h_long.front(), 0.14, 1e-15);
  EXPECT_EQ(s.h_long.back(), 1.4);
  EXPECT_EQ(s.h_tf, 1.0 / 300.0);
  EXPECT_FALSE(s.beta_authoritative);
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(qlre::evolution::builtin_model("ca3co2o6").n_s, s.steps());
  auto bad = s;
  bad.beta.pop_back();
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  // generators follow the schedule's field and beta at each step
  const auto patch = qlre::models::CaPatch::chain(qlre::models::CaLattice{}, 3);
  for (int k = 0; k < s.steps(); ++k) {
    const auto g = ca_lindblad_generators(patch, s.beta[k], AmplitudeMode::simulation, s.h_long[k]);
    const auto pi = stationary_distribution(classical_rate_matrix(g.generators, 3));
    EXPECT_LT((pi - gibbs_distribution(patch, s.beta[k], s.h_long[k])).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Hubbard, GeneratorCounts) {
  EXPECT_EQ(hubbard_landauer_generators({2, 2}).size(), 8u);
  EXPECT_EQ(hubbard_landauer_generators({10, 10}).size(), 40u);
}

TEST(Hubbard, TwoByTwoNess) {
  const qlre::models::HubbardLattice lat{2, 2};
  const auto spec = hubbard_landauer_spec(lat);
  // charge sectors: spin-up modes 0..3, spin-down 4..7; mode j is bit 7-j
  const auto ss = steady_state_charge_sector(spec, {0xF0, 0x0F});
  EXPECT_TRUE(ss.valid());
  EXPECT_LE(apply_rhs(spec, ss.data).norm(), 1e-9);
  double left = 0, right = 0;
  for (int y = 0; y < 2; ++y)
    for (int s = 0; s < 2; ++s) {
      const double nl = qlre::ops::expectation(lat.number(0, y, s), ss.data).real();
      const double nr = qlre::ops::expectation(lat.number(1, y, s), ss.data).real();
      EXPECT_LT(nl, nr);
      left += nl;
      right += nr;
    }
  // particles leave on the left and enter on the right at the same rate
  const double out_left = 2.0 * left, in_right = 2.0 * (4.0 - right);
  EXPECT_GT(out_left, 1e-3);
  EXPECT_NEAR(out_left, in_right, 1e-9);
}

TEST(SpecJson, RoundTrip) {
  const auto spec = random_spec(2, 55, RateConvention::half);
  const auto back = qlre::io::spec_from_json(qlre::io::to_json(spec));
  EXPECT_EQ(back.convention, RateConvention::half);
  EXPECT_LT(max_abs(build_liouvillian(back) - build_liouvillian(spec)), 1e-15);
}
