#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qlre/gate_calculus.hpp"

namespace qlre::blocks {

using gates::GateCost;

struct BlockEncodingCost {
  GateCost u;
  GateCost cu;
  std::function<GateCost(int)> ck_cu;  // ck_cu(0) == cu
};

// Named sub-totals so each constant can be pinned separately.
struct Breakdown {
  std::string name;
  GateCost total;
  std::vector<std::pair<std::string, double>> parts;
};

BlockEncodingCost sigma_pm_costs();

struct CaGeneratorParts {
  GateCost adder;           // 20-bit field adder core
  GateCost u_components;    // adder + C6X
  GateCost cu_components;   // adder + C7X + CSWAP
  double u_table_depth;     // 418
  double cu_table_depth;    // 427
  double u_prose_depth;     // 360 + 53
  double cu_prose_depth;    // 360 + 2 + 57
};
CaGeneratorParts ca_generator_parts();
BlockEncodingCost ca_generator_cost();

struct SelectParams {
  int M = 2;
  GateCost per_op;
  bool translation_invariant = false;
  double c_depth = 16;  // caller-chosen constant within c_depth_range
  static constexpr double c_min = 16, c_max = 208;
};

struct SelectCost {
  GateCost u;
  GateCost cu;
  double cswap_count = 0;
  double cnot_count = 0;
};

SelectCost select_naive(const SelectParams& p);
SelectCost select_translation(const SelectParams& p);
bool parallel_threshold(int M);
int parallel_threshold_crossing();  // smallest M >= 2 for which the threshold holds

struct ShiftCircuitCost {
  double t_binary = 0;  // stride decomposition
  double t_reported = 0;
  double t_naive = 0;
  double depth = 0;
  std::vector<std::pair<std::string, double>> per_axis;
};
ShiftCircuitCost ca_shift_circuit(int Lx = 9, int Ly = 9, int Lz = 25);

struct CaFullCu {
  int k = 0;
  int rate_types = 0;
  GateCost shift;
  GateCost generator_ck;
  GateCost total;
};
CaFullCu ca_full_cu(int rate_types = 39);

enum class HubbardVariant { naive, refined, translation };
HubbardVariant hubbard_variant_from_string(const std::string& s);
GateCost hubbard_c5u_cost();
Breakdown hubbard_generator_cost(HubbardVariant v);
// Component tally for the translation-trick CU; the pinned value is 1200.
Breakdown hubbard_translation_breakdown();

enum class ModelId { hubbard, ca };
ModelId model_from_string(const std::string& s);

struct HamiltonianEncoding {
  GateCost v;
  GateCost cv;
  double cu_plus_cv_t = 0;  // with the model's CU
  double cu_plus_cv_reported = 0;
};
HamiltonianEncoding hamiltonian_encoding_cost(ModelId m);

struct ModelNorms {
  double hamiltonian_norm = 0;
  double generator_norm_sq_sum = 0;
};
double rescaling_alpha(const ModelNorms& n);
ModelNorms hubbard_norms();  // 10x10 Landauer setup
ModelNorms ca_norms();       // 9x9x25 lattice, h_TF = 1/300

}  // namespace qlre::blocks
