#include "qlre/gate_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlre::gates {

bool GateCost::valid() const {
  if (t_count < 0 || rotation_count < 0 || rotation_depth < 0 || depth < 0 || ancillas < 0 || qubits_peak < 0 ||
      measurements < 0)
    return false;
  if (t_depth && (*t_depth < 0 || *t_depth > depth)) return false;
  return qubits_peak >= ancillas;
}

GateCost make_cost(double t, double depth, double ancillas) {
  GateCost c;
  c.t_count = t;
  c.depth = depth;
  c.ancillas = ancillas;
  c.qubits_peak = ancillas;
  return c;
}

namespace {
std::optional<double> combine(const std::optional<double>& a, const std::optional<double>& b, bool add) {
  if (!a && !b) return std::nullopt;
  double x = a.value_or(0), y = b.value_or(0);
  return add ? x + y : std::max(x, y);
}
}  // namespace

GateCost seq(const GateCost& a, const GateCost& b) {
  GateCost c;
  c.t_count = a.t_count + b.t_count;
  c.rotation_count = a.rotation_count + b.rotation_count;
  c.rotation_depth = a.rotation_depth + b.rotation_depth;
  c.depth = a.depth + b.depth;
  c.t_depth = combine(a.t_depth, b.t_depth, true);
  c.ancillas = std::max(a.ancillas, b.ancillas);
  c.qubits_peak = std::max(a.qubits_peak, b.qubits_peak);
  c.measurements = a.measurements + b.measurements;
  return c;
}

GateCost par(const GateCost& a, const GateCost& b) {
  GateCost c;
  c.t_count = a.t_count + b.t_count;
  c.rotation_count = a.rotation_count + b.rotation_count;
  c.rotation_depth = std::max(a.rotation_depth, b.rotation_depth);
  c.depth = std::max(a.depth, b.depth);
  c.t_depth = combine(a.t_depth, b.t_depth, false);
  c.ancillas = a.ancillas + b.ancillas;
  c.qubits_peak = a.qubits_peak + b.qubits_peak;
  c.measurements = a.measurements + b.measurements;
  return c;
}

GateCost repeat(const GateCost& a, double times) {
  GateCost c = a;
  c.t_count *= times;
  c.rotation_count *= times;
  c.rotation_depth *= times;
  c.depth *= times;
  if (c.t_depth) *c.t_depth *= times;
  c.measurements *= times;
  return c;
}

GateCost primitive_cost(Primitive g) {
  switch (g) {
    case Primitive::Toffoli: {
      GateCost c = make_cost(4, 11);
      c.t_depth = 1;
      return c;
    }
    case Primitive::CSWAP: return make_cost(4, 13);
    case Primitive::CT: return make_cost(5, 13);
    case Primitive::CCSWAP: return make_cost(6, 18, 1);
    case Primitive::C3X: return make_cost(6, 16);
  }
  throw std::invalid_argument("unknown primitive");
}

std::string primitive_name(Primitive g) {
  switch (g) {
    case Primitive::Toffoli: return "Toffoli";
    case Primitive::CSWAP: return "CSWAP";
    case Primitive::CT: return "CT";
    case Primitive::CCSWAP: return "CCSWAP";
    case Primitive::C3X: return "C3X";
  }
  return "?";
}

GateCost primitive_cost(const std::string& name) {
  for (auto g : {Primitive::Toffoli, Primitive::CSWAP, Primitive::CT, Primitive::CCSWAP, Primitive::C3X})
    if (primitive_name(g) == name) return primitive_cost(g);
  throw std::invalid_argument("unknown primitive gate: " + name);
}

GateCost multi_controlled_cost(int n) {
  if (n < 2) throw std::invalid_argument("multi_controlled_cost: n >= 2");
  if (n == 2) return primitive_cost(Primitive::Toffoli);
  if (n == 3) return primitive_cost(Primitive::C3X);
  return make_cost(4.0 * n - 4.0, std::round(16.0 * std::log2(n) + 12.0));
}

double rotation_synthesis_cost(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("rotation_synthesis_cost: 0 < eps < 1");
  return 0.53 * std::log2(1.0 / eps) + 4.86;
}

GateCost adder_block_cost(const std::vector<int>& m_sizes) {
  double s = 0;
  for (int m : m_sizes) {
    if (m < 1) throw std::invalid_argument("adder_block_cost: widths >= 1");
    s += m;
  }
  return make_cost(4.0 * s, 18.0 * s);
}

ControlResult add_controls(const ControlProfile& p) {
  if (p.m < 1) throw std::invalid_argument("add_controls: m >= 1");
  const double m = p.m;
  const double r = p.r.value_or(p.n_q > 1 ? 2.0 * std::log2(p.n_q) : 0.0);
  const double n_r = p.n_r.value_or(p.n_q);
  const double lm = std::log2(m);

  double sum1 = 0, sum2 = 0;  // primed sums over nonzero existing control counts
  for (int nj : p.n_list) {
    if (nj == 0) continue;
    sum1 += std::log2((nj + m) / nj);
    sum2 += std::log2((nj + 1.0) / nj);
  }

  ControlResult out;
  auto& m1 = out.methods[0];
  m1.t = 4.0 * (p.J * m + p.P * (m - 1));
  m1.depth = 16.0 * sum1 + 4.0 * p.P * (4.0 * lm - 3.0) + m * r;
  m1.qubits = m * n_r;

  auto& m2 = out.methods[1];
  m2.t = 8.0 * (m - 1) + 4.0 * p.J;
  m2.depth = 16.0 * sum2 + 8.0 * (4.0 * lm - 3.0) + r;
  m2.qubits = n_r;

  auto& m3 = out.methods[2];
  m3.t = (p.halving ? 4.0 : 8.0) * (m - 1) + 8.0 * p.n_q;
  m3.depth = 8.0 * (4.0 * lm - 3.0) + 2.0 * std::log2(std::max(p.n_q, 1.0)) + 26.0;
  m3.qubits = 2.0 * p.n_q;

  // Leading-order formulas; small m can drive the depth terms negative.
  for (auto& d : out.methods) d.depth = std::max(0.0, d.depth);

  out.best = 0;
  for (int i = 1; i < 3; ++i)
    if (out.methods[i].t < out.methods[out.best].t) out.best = i;
  return out;
}

}  // namespace qlre::gates
