#include "qlre/evolution_estimator.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "qlre/lattice_models.hpp"

namespace qlre::evolution {

using gates::make_cost;

Method method_from_string(const std::string& s) {
  if (s == "qsp") return Method::qsp;
  if (s == "trotter") return Method::trotter;
  throw std::invalid_argument("unknown method: " + s);
}

std::string to_string(Method m) { return m == Method::qsp ? "qsp" : "trotter"; }

std::string to_string(Provenance p) {
  return p == Provenance::derived_formula ? "derived-formula" : "fixed-input";
}

bool is_builtin_model(const std::string& id) { return id == "ca3co2o6" || id == "hubbard-10x10"; }

ModelCard builtin_model(const std::string& id) {
  ModelCard c;
  c.id = id;
  if (id == "hubbard-10x10") {
    c.norms = blocks::hubbard_norms();
    c.cu = blocks::hubbard_generator_cost(blocks::HubbardVariant::translation).total;
    c.cv = blocks::hamiltonian_encoding_cost(blocks::ModelId::hubbard).cv;
    c.qubits = 600;
    c.t = 36;
    c.eps = 0.1;
    c.n_s = 1;
    return c;
  }
  if (id == "ca3co2o6") {
    c.norms = blocks::ca_norms();
    c.cu = blocks::ca_full_cu(models::CaLattice{}.rate_class_count()).total;
    c.cv = make_cost(0, 0);
    c.qubits = c.cu.qubits_peak;
    c.t = 1e11;
    c.eps = 0.01;
    c.n_s = models::CaSchedule::defaults().steps();
    c.supports_trotter = true;
    return c;
  }
  throw std::invalid_argument("unknown built-in model: " + id);
}

double qsp_call_count(double alpha, double t, double eps, int n_s) {
  const double x = alpha * t / eps;
  if (!(x > 4.0)) throw std::domain_error("qsp_call_count: alpha*t/eps must exceed 4");
  const double l = std::log2(x);
  return n_s * alpha * t * l / std::log2(l);
}

double parallelism_factor(const GateCost& c) {
  if (c.depth <= 0) throw std::domain_error("parallelism_factor: zero depth");
  return c.t_count / (5.0 * c.depth);
}

ResourceReport qsp_resources(const EstimateRequest& req, const ModelCard& card) {
  if (!req.valid()) throw std::invalid_argument("qsp_resources: invalid request");
  ResourceReport r;
  r.model = card.id;
  r.method = Method::qsp;
  r.alpha = blocks::rescaling_alpha(card.norms);
  r.call_count = qsp_call_count(r.alpha, req.t, req.eps, req.n_s);
  const GateCost per_call = gates::seq(card.cu, card.cv);
  r.t_count = r.call_count * per_call.t_count;
  r.depth = r.call_count * per_call.depth;
  r.qubits = card.qubits;
  r.parallelism_k = parallelism_factor(card.cu);
  r.extra["per_call_t"] = per_call.t_count;
  r.extra["per_call_depth"] = per_call.depth;
  r.extra["cu_t"] = card.cu.t_count;
  r.extra["cu_depth"] = card.cu.depth;
  r.extra["cv_t"] = card.cv.t_count;
  r.extra["parallelism_k_with_cv"] = per_call.depth > 0 ? parallelism_factor(per_call) : 0.0;
  r.extra["t"] = req.t;
  r.extra["eps"] = req.eps;
  r.extra["n_s"] = req.n_s;
  for (auto k : {"call_count", "t_count", "depth", "alpha", "parallelism_k", "per_call_t", "per_call_depth",
                 "parallelism_k_with_cv"})
    r.provenance[k] = Provenance::derived_formula;
  r.provenance["qubits"] = Provenance::fixed_input;
  r.provenance["cu_t"] = card.id == "hubbard-10x10" ? Provenance::fixed_input : Provenance::derived_formula;
  r.provenance["cu_depth"] = Provenance::fixed_input;
  r.provenance["cv_t"] = Provenance::fixed_input;
  for (auto k : {"t", "eps", "n_s"}) r.provenance[k] = Provenance::fixed_input;
  return r;
}

double trotter_error_bound(double sum_2mL, double sum_2H, double sum_sq_L, double sum_sq_H, double delta) {
  if (sum_2mL < 0 || sum_2H < 0 || sum_sq_L < 0 || sum_sq_H < 0 || delta < 0)
    throw std::invalid_argument("trotter_error_bound: inputs >= 0");
  const double S = sum_2mL + sum_2H;
  const double Q = 0.5 * sum_sq_L + 0.5 * sum_sq_H;
  return 1.5 * delta * delta * S * S + delta * delta * Q * (1.0 + delta * S);
}

CaTrotterLayout ca_trotter_layout() {
  models::CaLattice lat;
  CaTrotterLayout l;
  l.spins = lat.site_count();
  l.rate_classes = lat.rate_class_count();
  l.coordination = lat.coordination();
  l.hz_norm = ops::norm_bound(lat.hz(0.0));
  l.hx_norm = ops::norm_bound(lat.hx(1.0 / 300.0));
  l.generator = blocks::ca_generator_cost();
  return l;
}

TrotterSums trotter_sums(const CaTrotterLayout& l) {
  TrotterSums s;
  const double per_group = 2.0 * l.m() * l.generator_norm;
  s.sum_2mL = l.layers() * per_group;
  s.sum_sq_L = l.layers() * per_group * per_group;
  s.sum_2H = 2.0 * l.hz_norm + 2.0 * l.hx_norm;
  s.sum_sq_H = 4.0 * l.hz_norm * l.hz_norm + 4.0 * l.hx_norm * l.hx_norm;
  return s;
}

namespace {
// Significand m and exponent e with x ~ m * 10^e, m carrying `digits` digits.
int sig_exponent(double x, int digits) { return static_cast<int>(std::floor(std::log10(std::abs(x)))) - (digits - 1); }
double scaled(double x, int e) { return e >= 0 ? x / std::pow(10.0, e) : x * std::pow(10.0, -e); }
// Nearest double to the decimal m * 10^e, built from text so it matches the literal.
double from_decimal(double m, int e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0fe%d", m, e);
  return std::strtod(buf, nullptr);
}
}  // namespace

double round_sig(double x, int digits) {
  if (x == 0) return 0;
  const int e = sig_exponent(x, digits);
  return from_decimal(std::round(scaled(x, e)), e);
}

double ceil_sig(double x, int digits) {
  if (x == 0) return 0;
  const int e = sig_exponent(x, digits);
  return from_decimal(std::ceil(scaled(x, e) * (1 - 1e-12)), e);
}

double floor_sig(double x, int digits) {
  if (x == 0) return 0;
  const int e = sig_exponent(x, digits);
  return from_decimal(std::floor(scaled(x, e) * (1 + 1e-12)), e);
}

StepBudget trotter_step_budget(const TrotterSums& s, double T_total, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("trotter_step_budget: eps > 0");
  StepBudget b;
  if (T_total <= 0) return b;
  auto total_error = [&](double d) { return (T_total / d) * s.bound(d); };
  // total_error is increasing in delta; bracket then bisect in log space
  double lo = 1e-300, hi = 1.0;
  if (total_error(hi) <= eps) {
    lo = hi;
  } else {
    while (total_error(lo * 1e10) <= eps && lo * 1e10 < hi) lo *= 1e10;
    for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-6; ++it) {
      const double mid = std::sqrt(lo * hi);
      (total_error(mid) <= eps ? lo : hi) = mid;
    }
  }
  if (!(total_error(lo) <= eps)) throw std::runtime_error("trotter_step_budget: infeasible budget");
  b.delta_search = lo;
  b.n_search = T_total / lo;
  b.delta = floor_sig(lo, 2);
  b.n_steps = ceil_sig(T_total / b.delta, 2);
  b.resubstituted = b.n_steps * s.bound(b.delta);
  return b;
}

GateCost trotter_step_cost(const CaTrotterLayout& l) {
  // one weak-measurement generator: U, controlled rotation pair, CU
  GateCost gen;
  gen.t_count = l.generator.u.t_count + l.generator.cu.t_count;
  gen.depth = l.generator.u.depth + l.generator.cu.depth + l.ctrl_rotation_depth;
  gen.rotation_count = l.ctrl_rotation_count;
  gen.rotation_depth = l.ctrl_rotation_count;

  GateCost step;
  step.t_count = l.generators() * gen.t_count;
  step.depth = l.layers() * gen.depth;
  step.rotation_depth = l.layers() * gen.rotation_depth;

  // Hamiltonian part: (coordination+1)/2 two-qubit rotations per spin for H_z
  // (couplings plus the longitudinal field), one X rotation per spin for H_x.
  const double z_rot = (l.coordination + 1) * l.spins / 2.0;
  const double x_rot = l.spins;
  const double z_layers = 2.0 * (l.coordination + 1);
  step.depth += z_layers * l.cnot_depth_per_layer;
  step.rotation_depth += z_layers + 1;
  step.rotation_count = std::ceil(l.generators() * gen.rotation_count + z_rot + x_rot);
  step.qubits_peak = 2.0 * l.spins;
  return step;
}

ResourceReport trotter_resources(const CaTrotterLayout& l, double T_total, double eps) {
  ResourceReport r;
  r.model = "ca3co2o6";
  r.method = Method::trotter;
  const TrotterSums sums = trotter_sums(l);
  const StepBudget b = trotter_step_budget(sums, T_total, eps);
  const GateCost step = trotter_step_cost(l);
  // rotations get the same budget as the Trotter error
  const double eps_rot = b.n_steps > 0 ? eps / (step.rotation_count * b.n_steps) : 0.0;
  const double t_per_rot = b.n_steps > 0 ? std::round(gates::rotation_synthesis_cost(eps_rot)) : 0.0;
  const double step_t = step.t_count + step.rotation_count * t_per_rot;
  const double step_depth = step.depth + step.rotation_depth * 2.0 * t_per_rot;

  r.call_count = b.n_steps;
  r.t_count = b.n_steps * step_t;
  r.depth = b.n_steps * step_depth;
  r.rotation_count = b.n_steps * step.rotation_count;
  r.qubits = step.qubits_peak;
  r.alpha = 1.0;
  r.parallelism_k = step_depth > 0 ? step_t / (5.0 * step_depth) : 0.0;
  r.extra = {{"sum_2mL", sums.sum_2mL},
             {"sum_2H", sums.sum_2H},
             {"sum_sq_L", sums.sum_sq_L},
             {"sum_sq_H", sums.sum_sq_H},
             {"delta_search", b.delta_search},
             {"delta", b.delta},
             {"n_steps", b.n_steps},
             {"resubstituted_error", b.resubstituted},
             {"step_t", step.t_count},
             {"step_rotations", step.rotation_count},
             {"step_depth_without_rotations", step.depth},
             {"step_rotation_depth", step.rotation_depth},
             {"eps_rotation", eps_rot},
             {"t_per_rotation", t_per_rot},
             {"step_t_with_rotations", step_t},
             {"step_depth_with_rotations", step_depth},
             {"T_total", T_total},
             {"eps", eps}};
  for (auto& [k, v] : r.extra) r.provenance[k] = Provenance::derived_formula;
  r.provenance["T_total"] = Provenance::fixed_input;
  r.provenance["eps"] = Provenance::fixed_input;
  for (auto k : {"call_count", "t_count", "depth", "rotation_count", "qubits", "alpha", "parallelism_k"})
    r.provenance[k] = Provenance::derived_formula;
  return r;
}

ThermalCost thermal_generator_cost(const ThermalCostParams& p) {
  if (p.lambda <= 0 || p.a_count <= 0 || p.t_av <= 0 || p.eps <= 0 || p.v_cost <= 0 || p.h_norm <= 0)
    throw std::invalid_argument("thermal_generator_cost: parameters must be positive");
  ThermalCost c;
  c.t_count = std::pow(p.lambda, 3) * (2.0 * p.a_count) * p.t_av * p.v_cost / p.eps;
  const double eps_l = p.eps / p.t_av;
  c.n_bits = std::log2(p.h_norm * p.a_count / eps_l);
  c.t0 = std::pow(2.0, -c.n_bits / 2.0);
  return c;
}

double utility_estimate(const UtilityInput& u) {
  double v = u.tech_weight * u.revenue_share * u.market_size;
  for (double f : u.extra_factors) v *= f;
  for (double f : {u.tech_weight, u.revenue_share})
    if (!(f > 0 && f <= 10)) throw std::invalid_argument("utility_estimate: factor outside (0, 10]");
  for (double f : u.extra_factors)
    if (!(f > 0 && f <= 10)) throw std::invalid_argument("utility_estimate: factor outside (0, 10]");
  return v;
}

double revenue_delta(double e, double c1, double c2) { return 0.5 * e * (c1 - c2); }

double per_material_cost(double budget, int materials) {
  if (materials <= 0) throw std::invalid_argument("per_material_cost: materials > 0");
  return budget / materials;
}

}  // namespace qlre::evolution
