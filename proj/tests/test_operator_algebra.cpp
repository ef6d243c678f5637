#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <random>

#include "dense_oracle.hpp"
#include "qlre/lattice_models.hpp"
#include "qlre/operator_algebra.hpp"

using namespace qlre::ops;

namespace {

OperatorSum from(const std::string& s, cplx c = 1.0) { return OperatorSum::pauli(int(s.size()), PauliString::from_dense(s), c); }

double max_diff(const DenseOperator& a, const DenseOperator& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::VectorXd spectrum(const OperatorSum& a) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(to_dense(a));
  return es.eigenvalues();
}

OperatorSum random_sum(int n, std::mt19937_64& rng, int terms) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::normal_distribution<double> g;
  OperatorSum acc(n);
  for (int k = 0; k < terms; ++k) {
    std::string s;
    for (int q = 0; q < n; ++q) s += "IXYZ"[letter(rng)];
    acc = acc + from(s, cplx(g(rng), g(rng)));
  }
  return acc;
}

}  // namespace

TEST(PauliMultiply, SingleQubitTable) {
  const auto xy = multiply({1.0, PauliString::single(0, Letter::X)}, {1.0, PauliString::single(0, Letter::Y)});
  EXPECT_EQ(xy.letters, PauliString::single(0, Letter::Z));
  EXPECT_EQ(xy.coefficient, cplx(0, 1));

  const auto zz = multiply({1.0, PauliString::single(0, Letter::Z)}, {1.0, PauliString::single(0, Letter::Z)});
  EXPECT_TRUE(zz.letters.is_identity());
  EXPECT_EQ(zz.coefficient, cplx(1, 0));
}

TEST(PauliMultiply, TwoQubitAgainstDense) {
  const auto p = multiply({1.0, PauliString::from_dense("ZZ")}, {1.0, PauliString::from_dense("XI")});
  EXPECT_EQ(p.letters, PauliString::from_dense("YZ"));
  EXPECT_EQ(p.coefficient, cplx(0, 1));
  EXPECT_LT(max_diff(p.coefficient * oracle::string(p.letters.to_dense(2)), oracle::string("ZZ") * oracle::string("XI")),
            1e-14);
}

TEST(PauliMultiply, AllPairsOnThreeQubitsMatchDenseAndAssociate) {
  std::vector<std::string> all;
  for (int idx = 0; idx < 64; ++idx) {
    std::string s;
    for (int q = 0; q < 3; ++q) s += "IXYZ"[(idx >> (2 * (2 - q))) & 3];
    all.push_back(s);
  }
  for (auto& a : all)
    for (auto& b : all) {
      const auto p = multiply({1.0, PauliString::from_dense(a)}, {1.0, PauliString::from_dense(b)});
      ASSERT_LT(max_diff(p.coefficient * oracle::string(p.letters.to_dense(3)), oracle::string(a) * oracle::string(b)),
                1e-14)
          << a << " * " << b;
    }
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const PauliTerm a{1.0, PauliString::from_dense(all[rng() % 64])};
    const PauliTerm b{cplx(0, 1), PauliString::from_dense(all[rng() % 64])};
    const PauliTerm c{-1.0, PauliString::from_dense(all[rng() % 64])};
    const auto l = multiply(multiply(a, b), c), r = multiply(a, multiply(b, c));
    ASSERT_EQ(l.letters, r.letters);
    ASSERT_EQ(l.coefficient, r.coefficient);
  }
}

TEST(OperatorSum, CanonicalMergeDropsZeros) {
  const auto s = from("XX", 1.5) + from("XX", -1.5) + from("ZI", 2.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.coefficient_of(PauliString::from_dense("ZI")), cplx(2.0));
  EXPECT_EQ(s.coefficient_of(PauliString::from_dense("XX")), cplx(0.0));
}

TEST(Commutator, Examples) {
  EXPECT_TRUE(commutator(from("X"), from("X")).empty());
  const auto zx = commutator(from("Z"), from("X"));
  ASSERT_EQ(zx.size(), 1u);
  EXPECT_EQ(zx.coefficient_of(PauliString::from_dense("Y")), cplx(0, 2));

  const auto c = commutator(from("ZZ"), from("XI"));
  const DenseOperator ref = oracle::string("ZZ") * oracle::string("XI") - oracle::string("XI") * oracle::string("ZZ");
  EXPECT_LT(max_diff(to_dense(c), ref), 1e-14);
  EXPECT_EQ(c.coefficient_of(PauliString::from_dense("YZ")), cplx(0, 2));
}

TEST(Commutator, WidthMismatchThrows) { EXPECT_THROW(commutator(from("X"), from("XX")), std::invalid_argument); }

TEST(NormBound, Examples) {
  EXPECT_DOUBLE_EQ(norm_bound(from("XX", 1.5) + from("ZI", -0.5)), 2.0);
  EXPECT_DOUBLE_EQ(norm_bound(OperatorSum(3)), 0.0);
}

TEST(NormBound, CaZPartAtZeroField) {
  const qlre::models::CaLattice lat;
  const double b = norm_bound(lat.hz(0.0));
  EXPECT_NEAR(b, 3240.0, 1e-6);
  EXPECT_LE(b, 1.6 * 2025 + 1e-9);
}

TEST(NormBound, DominatesSpectralNorm) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + int(rng() % 3);
    const auto a = random_sum(n, rng, 1 + int(rng() % 6));
    Eigen::JacobiSVD<DenseOperator> svd(to_dense(a));
    const double spec = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    ASSERT_GE(norm_bound(a) + 1e-12, spec);
  }
}

TEST(ToDense, Examples) {
  EXPECT_LT(max_diff(to_dense(OperatorSum::identity(1)), DenseOperator::Identity(2, 2)), 0.0 + 1e-15);
  EXPECT_LT(max_diff(to_dense(OperatorSum::single(2, 0, Letter::X)), oracle::string("XI")), 1e-15);
  EXPECT_THROW(to_dense(OperatorSum::identity(15)), std::length_error);
}

TEST(Expectation, MatchesDenseTrace) {
  std::mt19937_64 rng(5);
  const auto a = random_sum(3, rng, 8);
  DenseOperator g = DenseOperator::Random(8, 8);
  DenseOperator rho = g * g.adjoint();
  rho /= rho.trace();
  EXPECT_LT(std::abs(expectation(a, rho) - (to_dense(a) * rho).trace()), 1e-13);
}

TEST(PauliIndex, RoundTrip) {
  for (std::uint64_t i = 0; i < 256; ++i) ASSERT_EQ(pauli_index(pauli_from_index(i, 4), 4), i);
  EXPECT_EQ(pauli_index(PauliString::from_dense("XIZ"), 3), 1u * 16 + 3u);
}

TEST(Clifford, IdentityAndHadamard) {
  std::mt19937_64 rng(8);
  const auto a = random_sum(3, rng, 5);
  const auto same = conjugate_by_clifford(CliffordTableau(3), a);
  EXPECT_TRUE((same - a).empty());

  const auto h = conjugate_by_clifford(CliffordTableau::hadamard(2, 0), OperatorSum::single(2, 0, Letter::X));
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h.coefficient_of(PauliString::from_dense("ZI")), cplx(1.0));
}

TEST(Clifford, RandomTableauPreservesTfimSpectrum) {
  const auto h = qlre::models::tfim_hamiltonian(4);
  const auto t = random_clifford(4, 7);
  EXPECT_TRUE(t.is_symplectic());
  const auto c = conjugate_by_clifford(t, h);
  EXPECT_EQ(c.size(), h.size());
  EXPECT_LT((spectrum(c) - spectrum(h)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Clifford, ConjugationPreservesMagnitudesAndTermCount) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + int(rng() % 4);
    const auto a = random_sum(n, rng, 6);
    const auto c = conjugate_by_clifford(random_clifford(n, rng()), a);
    ASSERT_EQ(c.size(), a.size());
    std::vector<double> ma, mc;
    for (auto& t : a.terms()) ma.push_back(std::abs(t.coefficient));
    for (auto& t : c.terms()) mc.push_back(std::abs(t.coefficient));
    std::sort(ma.begin(), ma.end());
    std::sort(mc.begin(), mc.end());
    for (std::size_t i = 0; i < ma.size(); ++i) ASSERT_NEAR(ma[i], mc[i], 1e-12);
  }
}

TEST(Clifford, WidthMismatchThrows) {
  EXPECT_THROW(conjugate_by_clifford(CliffordTableau(2), OperatorSum::identity(3)), std::invalid_argument);
}

TEST(RandomClifford, DeterministicAndSymplectic) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = random_clifford(3, s), b = random_clifford(3, s);
    ASSERT_TRUE(a == b);
    ASSERT_TRUE(a.is_symplectic());
  }
}

TEST(RandomClifford, SingleQubitHitsAllTwentyFour) {
  // 6 ordered (X image, Z image) letter pairs times 4 sign patterns.
  std::map<std::tuple<int, int, int, int>, int> seen;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const auto t = random_clifford(1, s);
    const auto x = t.image_of_row(0), z = t.image_of_row(1);
    seen[{int(x.letters.at(0)), int(z.letters.at(0)), x.coefficient.real() > 0, z.coefficient.real() > 0}]++;
  }
  EXPECT_EQ(seen.size(), 24u);
}

TEST(RandomClifford, TwoQubitActionOnXIsUniform) {
  // Over the full Clifford group the image of X_0 is uniform over the 15
  // non-identity Paulis. Critical value: chi-square, 14 dof, p = 0.01.
  constexpr int samples = 10000;
  constexpr double chi2_critical = 29.141237740672796;
  std::map<std::string, int> counts;
  for (int s = 0; s < samples; ++s) counts[random_clifford(2, 1000 + s).image_of_row(0).letters.to_dense(2)]++;
  ASSERT_EQ(counts.size(), 15u);
  const double expected = samples / 15.0;
  double chi2 = 0;
  for (auto& [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, chi2_critical);
}

TEST(TConjugation, Examples) {
  const auto z = conjugate_by_T(0, OperatorSum::single(1, 0, Letter::Z));
  EXPECT_TRUE((z - OperatorSum::single(1, 0, Letter::Z)).empty());

  const double r = 1 / std::sqrt(2.0);
  const auto x = conjugate_by_T(0, OperatorSum::single(1, 0, Letter::X));
  EXPECT_NEAR(std::abs(x.coefficient_of(PauliString::from_dense("X")) - r), 0, 1e-15);
  EXPECT_NEAR(std::abs(x.coefficient_of(PauliString::from_dense("Y")) - r), 0, 1e-15);

  const auto xx = conjugate_by_T(1, from("XX"));
  EXPECT_EQ(xx.size(), 2u);
  oracle::M T = oracle::M::Identity(2, 2);
  T(1, 1) = std::polar(1.0, M_PI / 4);
  const oracle::M U = oracle::kron(oracle::M::Identity(2, 2), T);
  EXPECT_LT(max_diff(to_dense(xx), U * oracle::string("XX") * U.adjoint()), 1e-12);
}

TEST(TConjugation, AtMostDoublesAndPreservesSpectrum) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + int(rng() % 3);
    auto a = random_sum(n, rng, 5);
    a = a + a.dagger();
    const auto t = conjugate_by_T(int(rng() % n), a);
    ASSERT_LE(t.size(), 2 * a.size());
    ASSERT_LT((spectrum(t) - spectrum(a)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(JordanWigner, Examples) {
  const auto c0 = jordan_wigner({cann(0)}, 1);
  EXPECT_LT(max_diff(to_dense(c0), 0.5 * (oracle::pauli('X') + oracle::C(0, 1) * oracle::pauli('Y'))), 1e-15);

  const auto c2d = jordan_wigner({cdag(2)}, 4);
  const oracle::M down = 0.5 * (oracle::pauli('X') - oracle::C(0, 1) * oracle::pauli('Y'));
  const oracle::M ref =
      oracle::kron(oracle::kron(oracle::kron(oracle::pauli('Z'), oracle::pauli('Z')), down), oracle::pauli('I'));
  EXPECT_LT(max_diff(to_dense(c2d), ref), 1e-15);
  EXPECT_THROW(jordan_wigner({cann(4)}, 4), std::out_of_range);
}

TEST(JordanWigner, CanonicalAnticommutation) {
  constexpr int n = 6;
  const int d = 1 << n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const DenseOperator ci = to_dense(jordan_wigner({cann(i)}, n));
      const DenseOperator cj = to_dense(jordan_wigner({cann(j)}, n));
      const DenseOperator cjd = to_dense(jordan_wigner({cdag(j)}, n));
      const DenseOperator ref = (i == j ? 1.0 : 0.0) * DenseOperator::Identity(d, d);
      ASSERT_LT(max_diff(ci * cjd + cjd * ci, ref), 1e-12);
      ASSERT_LT((ci * cj + cj * ci).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(JordanWigner, NumberOperatorProduct) {
  // c_1^dag c_1 = (1 - Z_1)/2 with no string left over
  const auto nop = jordan_wigner({cdag(1), cann(1)}, 3);
  EXPECT_TRUE((nop - (OperatorSum::identity(3, 0.5) - OperatorSum::single(3, 1, Letter::Z, 0.5))).empty());
}
