#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qlre::gates {

// Counts are doubles so leading-order formulas can stay fractional until a
// report rounds them; tabulated primitives are exact integers.
struct GateCost {
  double t_count = 0;
  double rotation_count = 0;
  double rotation_depth = 0;
  double depth = 0;
  std::optional<double> t_depth;
  double ancillas = 0;
  double qubits_peak = 0;
  double measurements = 0;

  bool valid() const;
  bool operator==(const GateCost&) const = default;
};

GateCost make_cost(double t, double depth, double ancillas = 0);

GateCost seq(const GateCost& a, const GateCost& b);
GateCost par(const GateCost& a, const GateCost& b);
GateCost repeat(const GateCost& a, double times);  // seq of `times` copies

enum class Primitive { Toffoli, CSWAP, CT, CCSWAP, C3X };

GateCost primitive_cost(Primitive g);
GateCost primitive_cost(const std::string& name);
std::string primitive_name(Primitive g);

GateCost multi_controlled_cost(int n);
double rotation_synthesis_cost(double eps);
GateCost adder_block_cost(const std::vector<int>& m_sizes);

struct ControlProfile {
  double n_q = 1;
  int J = 0;
  int P = 0;
  std::vector<int> n_list;  // existing control counts, zeros skipped in the primed sums
  int m = 1;
  std::optional<double> r;    // defaults to 2 log2 n_q
  std::optional<double> n_r;  // defaults to n_q
  bool halving = false;       // Gidney halving of the method-3 compute/uncompute pair
};

struct ControlDelta {
  double t = 0;
  double depth = 0;
  double qubits = 0;
};

struct ControlResult {
  std::array<ControlDelta, 3> methods;
  int best = 0;  // index (0-based) of the minimal-T method
};

ControlResult add_controls(const ControlProfile& p);

}  // namespace qlre::gates
