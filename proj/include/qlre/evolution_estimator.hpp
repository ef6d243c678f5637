#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlre/circuit_blocks.hpp"
#include "qlre/gate_calculus.hpp"

namespace qlre::evolution {

using gates::GateCost;

enum class Method { qsp, trotter };
Method method_from_string(const std::string& s);
std::string to_string(Method m);

// Everything the QSP pipeline needs to know about a model.
struct ModelCard {
  std::string id;
  blocks::ModelNorms norms;
  GateCost cu;  // Lindbladian block encoding, controlled
  GateCost cv;  // Hamiltonian block encoding, controlled
  double qubits = 0;
  double t = 1;
  double eps = 0.1;
  int n_s = 1;
  bool supports_trotter = false;
};

ModelCard builtin_model(const std::string& id);  // "ca3co2o6" | "hubbard-10x10"
bool is_builtin_model(const std::string& id);

struct EstimateRequest {
  std::string model;
  double t = 1;
  double eps = 0.1;
  int n_s = 1;
  Method method = Method::qsp;
  bool valid() const { return t > 0 && eps > 0 && eps < 1 && n_s >= 1; }
};

enum class Provenance { derived_formula, fixed_input };
std::string to_string(Provenance p);

struct ResourceReport {
  std::string model;
  Method method = Method::qsp;
  double call_count = 0;
  double t_count = 0;
  double depth = 0;
  double rotation_count = 0;
  double qubits = 0;
  double alpha = 0;
  double parallelism_k = 0;
  std::map<std::string, double> extra;                // method metadata (delta, n_steps, ...)
  std::map<std::string, Provenance> provenance;       // per reported number
};

double qsp_call_count(double alpha, double t, double eps, int n_s);
ResourceReport qsp_resources(const EstimateRequest& req, const ModelCard& card);

double trotter_error_bound(double sum_2mL, double sum_2H, double sum_sq_L, double sum_sq_H, double delta);

struct TrotterSums {
  double sum_2mL = 0;
  double sum_2H = 0;
  double sum_sq_L = 0;
  double sum_sq_H = 0;
  double bound(double delta) const { return trotter_error_bound(sum_2mL, sum_2H, sum_sq_L, sum_sq_H, delta); }
};

// Geometry of one Trotter step on the Ca lattice.
struct CaTrotterLayout {
  int spins = 2025;
  int rate_classes = 39;
  int commuting_tiles = 18;   // generators per rate class split into commuting layers
  int coordination = 14;
  double cnot_depth_per_layer = 4;
  double generator_norm = 1;  // ||L|| <= 1 after rescaling
  double hz_norm = 0;         // bond-shared norm bound of H_z
  double hx_norm = 0;
  blocks::BlockEncodingCost generator;
  double ctrl_rotation_depth = 2;  // CNOT pair around the two rotations
  double ctrl_rotation_count = 2;

  double generators() const { return double(rate_classes) * spins; }
  double layers() const { return double(rate_classes) * commuting_tiles; }
  double m() const { return double(spins) / commuting_tiles; }
};

CaTrotterLayout ca_trotter_layout();
TrotterSums trotter_sums(const CaTrotterLayout& l);

struct StepBudget {
  double delta_search = 0;  // bisection result
  double n_search = 0;
  double delta = 0;         // reported: rounded down to 2 significant figures
  double n_steps = 0;       // reported: T/delta rounded up to 2 significant figures
  double resubstituted = 0; // n_steps * bound(delta)
};

StepBudget trotter_step_budget(const TrotterSums& s, double T_total, double eps);
GateCost trotter_step_cost(const CaTrotterLayout& l);
ResourceReport trotter_resources(const CaTrotterLayout& l, double T_total, double eps);

struct ThermalCostParams {
  double lambda = 1500;
  double a_count = 20;
  double t_av = 5000;
  double eps = 1;
  double v_cost = 17000;
  double h_norm = 1500;
};

struct ThermalCost {
  double t_count = 0;
  double n_bits = 0;
  double t0 = 0;
};

ThermalCost thermal_generator_cost(const ThermalCostParams& p);
double parallelism_factor(const GateCost& c);

struct UtilityInput {
  double tech_weight = 0.2;
  double revenue_share = 0.2;
  std::vector<double> extra_factors{0.1, 0.1};
  double market_size = 1.1e12;
};

double utility_estimate(const UtilityInput& u);
double revenue_delta(double e, double c1, double c2);
double per_material_cost(double budget = 39e6, int materials = 20);

double round_sig(double x, int digits);
double ceil_sig(double x, int digits);
double floor_sig(double x, int digits);

}  // namespace qlre::evolution
