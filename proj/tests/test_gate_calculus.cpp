#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qlre/gate_calculus.hpp"

using namespace qlre::gates;

TEST(Primitives, GoldenTable) {
  struct Row {
    Primitive g;
    double t, depth;
  };
  for (auto [g, t, d] : {Row{Primitive::Toffoli, 4, 11}, Row{Primitive::CSWAP, 4, 13}, Row{Primitive::CT, 5, 13},
                         Row{Primitive::CCSWAP, 6, 18}, Row{Primitive::C3X, 6, 16}}) {
    const auto c = primitive_cost(g);
    EXPECT_EQ(c.t_count, t) << primitive_name(g);
    EXPECT_EQ(c.depth, d) << primitive_name(g);
    EXPECT_TRUE(c.valid());
  }
  EXPECT_EQ(primitive_cost(Primitive::Toffoli).t_depth, 1.0);
  EXPECT_EQ(primitive_cost(Primitive::CCSWAP).ancillas, 1.0);
  EXPECT_EQ(primitive_cost("CSWAP"), primitive_cost(Primitive::CSWAP));
  EXPECT_THROW(primitive_cost("CCCSWAP"), std::invalid_argument);
}

TEST(MultiControlled, QuotedValues) {
  EXPECT_EQ(multi_controlled_cost(7), make_cost(24, 57));
  EXPECT_EQ(multi_controlled_cost(6), make_cost(20, 53));
  EXPECT_EQ(multi_controlled_cost(3).t_count, 6);
  EXPECT_EQ(multi_controlled_cost(3).depth, 16);
  EXPECT_EQ(multi_controlled_cost(2).depth, 11);
  EXPECT_THROW(multi_controlled_cost(1), std::invalid_argument);
}

TEST(MultiControlled, MonotoneFromFour) {
  for (int n = 4; n < 200; ++n) {
    const auto a = multi_controlled_cost(n), b = multi_controlled_cost(n + 1);
    ASSERT_LT(a.t_count, b.t_count);
    ASSERT_LE(a.depth, b.depth);
  }
}

TEST(RotationSynthesis, Values) {
  EXPECT_EQ(std::round(rotation_synthesis_cost(1.4e-42)), 79);
  EXPECT_NEAR(rotation_synthesis_cost(std::pow(2.0, -100)), 57.86, 1e-12);
  EXPECT_EQ(std::round(rotation_synthesis_cost(std::pow(2.0, -100))), 58);
  EXPECT_THROW(rotation_synthesis_cost(0.0), std::domain_error);
  EXPECT_THROW(rotation_synthesis_cost(1.0), std::domain_error);
  double prev = rotation_synthesis_cost(1e-300);
  for (double e = 1e-299; e < 0.99; e *= 3.7) {
    const double v = rotation_synthesis_cost(e);
    ASSERT_LE(v, prev);
    prev = v;
  }
}

TEST(Adder, Values) {
  EXPECT_EQ(adder_block_cost({20}), make_cost(80, 360));
  EXPECT_EQ(adder_block_cost({1}), make_cost(4, 18));
  EXPECT_EQ(adder_block_cost({3, 2}), make_cost(20, 90));
  EXPECT_THROW(adder_block_cost({0}), std::invalid_argument);
}

TEST(AddControls, SigmaPmTwoControls) {
  ControlProfile p;
  p.m = 2;
  p.J = 1;
  p.P = 100;
  p.n_q = 2;
  p.n_list = {1};
  const auto r = add_controls(p);
  EXPECT_EQ(r.methods[1].t, 12);
  EXPECT_EQ(r.best, 1);
}

TEST(AddControls, CaGeneratorExtraControls) {
  for (int k = 1; k <= 8; ++k) {
    ControlProfile p;
    p.m = k + 1;
    p.J = 2;
    p.n_q = 20;
    const auto r = add_controls(p);
    ASSERT_EQ(r.methods[1].t, 8.0 * (k + 1));
  }
}

TEST(AddControls, NoControlsCostNothing) {
  ControlProfile p;
  p.m = 1;
  const auto r = add_controls(p);
  EXPECT_EQ(r.methods[0].t, 0);
  EXPECT_EQ(r.methods[1].t, 0);
}

TEST(AddControls, MethodFormulas) {
  ControlProfile p;
  p.m = 4;
  p.J = 3;
  p.P = 5;
  p.n_q = 8;
  const auto r = add_controls(p);
  EXPECT_EQ(r.methods[0].t, 4.0 * (3 * 4 + 5 * 3));
  EXPECT_EQ(r.methods[1].t, 8.0 * 3 + 4.0 * 3);
  EXPECT_EQ(r.methods[2].t, 8.0 * 3 + 8.0 * 8);
  p.halving = true;
  EXPECT_EQ(add_controls(p).methods[2].t, 4.0 * 3 + 8.0 * 8);
  EXPECT_THROW(add_controls(ControlProfile{.m = 0}), std::invalid_argument);
}

TEST(AddControls, SelectedMethodIsMinimal) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 500; ++k) {
    ControlProfile p;
    p.m = 1 + int(rng() % 10);
    p.J = int(rng() % 12);
    p.P = int(rng() % 200);
    p.n_q = 1 + double(rng() % 30);
    for (int j = 0; j < p.J; ++j) p.n_list.push_back(int(rng() % 6));
    const auto r = add_controls(p);
    for (auto& m : r.methods) ASSERT_LE(r.methods[r.best].t, m.t);
  }
}

TEST(Compose, SeqAndPar) {
  const auto t = primitive_cost(Primitive::Toffoli), c = primitive_cost(Primitive::CSWAP);
  const auto s = seq(t, t);
  EXPECT_EQ(s.t_count, 8);
  EXPECT_EQ(s.depth, 22);
  const auto p = par(t, c);
  EXPECT_EQ(p.t_count, 8);
  EXPECT_EQ(p.depth, 13);
  EXPECT_EQ(repeat(t, 3).t_count, 12);
}

TEST(Compose, SeqAssociative) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(0, 1000);
  auto draw = [&] {
    GateCost c = make_cost(u(rng), u(rng), u(rng) % 7);
    c.rotation_count = u(rng);
    c.rotation_depth = u(rng) % 50;
    c.measurements = u(rng) % 3;
    return c;
  };
  for (int k = 0; k < 100; ++k) {
    const auto a = draw(), b = draw(), c = draw();
    ASSERT_EQ(seq(seq(a, b), c), seq(a, seq(b, c)));
    ASSERT_EQ(par(par(a, b), c), par(a, par(b, c)));
  }
}

TEST(GateCostInvariants, Validity) {
  GateCost c = make_cost(4, 10, 2);
  EXPECT_TRUE(c.valid());
  c.t_depth = 11;
  EXPECT_FALSE(c.valid());
  c = make_cost(4, 10, 2);
  c.qubits_peak = 1;
  EXPECT_FALSE(c.valid());
  EXPECT_FALSE(make_cost(-1, 3).valid());
}
