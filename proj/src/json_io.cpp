#include "qlre/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qlre::io {

using ops::cplx;
using ops::OperatorSum;
using ops::PauliString;
using ops::PauliTerm;

namespace {

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

gates::GateCost cost_from(const json& j) {
  gates::GateCost c = gates::make_cost(j.at("t").get<double>(), j.value("depth", 0.0));
  c.qubits_peak = j.value("qubits", 0.0);
  if (!c.valid()) throw std::invalid_argument("cost entries must be nonnegative");
  return c;
}

evolution::Provenance provenance_from(const std::string& s) {
  if (s == "derived-formula") return evolution::Provenance::derived_formula;
  if (s == "fixed-input") return evolution::Provenance::fixed_input;
  throw std::invalid_argument("unknown provenance tag: " + s);
}

}  // namespace

json to_json(const OperatorSum& a) {
  json terms = json::array();
  for (auto& t : a.terms()) {
    json p = json::object();
    for (auto& [q, l] : t.letters.letters) p[std::to_string(q)] = std::string(1, ops::letter_char(l));
    terms.push_back({{"c", complex_json(t.coefficient)}, {"p", p}});
  }
  return {{"n", a.site_count()}, {"terms", terms}};
}

OperatorSum operator_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("operator: n >= 1");
  std::vector<PauliTerm> terms;
  for (auto& t : j.at("terms")) {
    std::vector<std::pair<std::uint32_t, ops::Letter>> letters;
    for (auto& [k, v] : t.at("p").items()) {
      const int q = std::stoi(k);
      if (q < 0 || q >= n) throw std::invalid_argument("operator: site out of range");
      const auto s = v.get<std::string>();
      if (s.size() != 1) throw std::invalid_argument("operator: letter must be one of IXYZ");
      const auto l = ops::letter_from_char(s[0]);
      if (l != ops::Letter::I) letters.emplace_back(static_cast<std::uint32_t>(q), l);
    }
    terms.push_back({complex_from(t.at("c")), PauliString(letters)});
  }
  return OperatorSum(n, terms);
}

json to_json(const lindblad::LindbladSpec& s) {
  json gens = json::array();
  for (auto& g : s.generators) gens.push_back({{"amplitude", complex_json(g.amplitude)}, {"op", to_json(g.op)}});
  json j = to_json(s.hamiltonian);
  j["generators"] = gens;
  j["convention"] = lindblad::to_string(s.convention);
  return j;
}

lindblad::LindbladSpec spec_from_json(const json& j) {
  lindblad::LindbladSpec s;
  s.hamiltonian = operator_from_json(j);
  s.convention = lindblad::convention_from_string(j.at("convention").get<std::string>());
  for (auto& g : j.value("generators", json::array()))
    s.generators.push_back({complex_from(g.value("amplitude", json(1.0))), operator_from_json(g.at("op"))});
  s.validate();
  return s;
}

json to_json(const evolution::ResourceReport& r) {
  json prov = json::object();
  for (auto& [k, v] : r.provenance) prov[k] = evolution::to_string(v);
  json extra = json::object();
  for (auto& [k, v] : r.extra) extra[k] = v;
  return {{"model", r.model},
          {"method", evolution::to_string(r.method)},
          {"call_count", r.call_count},
          {"t_count", r.t_count},
          {"depth", r.depth},
          {"rotation_count", r.rotation_count},
          {"qubits", r.qubits},
          {"alpha", r.alpha},
          {"parallelism_k", r.parallelism_k},
          {"extra", extra},
          {"provenance", prov}};
}

evolution::ResourceReport report_from_json(const json& j) {
  evolution::ResourceReport r;
  r.model = j.at("model").get<std::string>();
  r.method = evolution::method_from_string(j.at("method").get<std::string>());
  r.call_count = j.at("call_count").get<double>();
  r.t_count = j.at("t_count").get<double>();
  r.depth = j.at("depth").get<double>();
  r.rotation_count = j.value("rotation_count", 0.0);
  r.qubits = j.at("qubits").get<double>();
  r.alpha = j.value("alpha", 0.0);
  r.parallelism_k = j.value("parallelism_k", 0.0);
  const json extra = j.value("extra", json::object()), prov = j.value("provenance", json::object());
  for (auto& [k, v] : extra.items()) r.extra[k] = v.get<double>();
  for (auto& [k, v] : prov.items()) r.provenance[k] = provenance_from(v);
  return r;
}

std::string report_to_csv(const evolution::ResourceReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "field,value,provenance\n";
  auto row = [&](const std::string& k, double v) {
    auto it = r.provenance.find(k);
    os << k << ',' << v << ',' << (it == r.provenance.end() ? "" : evolution::to_string(it->second)) << '\n';
  };
  os << "model," << r.model << ",\n";
  os << "method," << evolution::to_string(r.method) << ",\n";
  row("call_count", r.call_count);
  row("t_count", r.t_count);
  row("depth", r.depth);
  row("rotation_count", r.rotation_count);
  row("qubits", r.qubits);
  row("alpha", r.alpha);
  row("parallelism_k", r.parallelism_k);
  for (auto& [k, v] : r.extra) row(k, v);
  return os.str();
}

physical::HardwareParams hardware_from_json(const json& j) {
  physical::HardwareParams hw;
  hw.p_phys = j.value("p_phys", hw.p_phys);
  if (j.contains("cycle_ns")) hw.cycle_time = j["cycle_ns"].get<double>() * 1e-9;
  hw.p_threshold = j.value("p_th", hw.p_threshold);
  hw.prefactor_a = j.value("a", hw.prefactor_a);
  hw.factory.fraction_of_total = j.value("factory_fraction", hw.factory.fraction_of_total);
  hw.factory.qubits_per_factory = j.value("factory_qubits", hw.factory.qubits_per_factory);
  hw.factory.t_states_per_cycle = j.value("t_states_per_cycle", hw.factory.t_states_per_cycle);
  hw.validate();
  return hw;
}

json to_json(const physical::HardwareParams& hw) {
  return {{"p_phys", hw.p_phys},
          {"cycle_ns", hw.cycle_time * 1e9},
          {"p_th", hw.p_threshold},
          {"a", hw.prefactor_a},
          {"factory_fraction", hw.factory.fraction_of_total},
          {"factory_qubits", hw.factory.qubits_per_factory},
          {"t_states_per_cycle", hw.factory.t_states_per_cycle}};
}

json to_json(const physical::PhysicalEstimate& e) {
  return {{"mode", physical::to_string(e.mode)},
          {"code_distance", e.code_distance},
          {"runtime_seconds", e.runtime_seconds},
          {"physical_qubits", e.physical_qubits},
          {"factory_qubits", e.factory_qubits},
          {"achieved_logical_error", e.achieved_logical_error}};
}

evolution::ModelCard model_from_json(const json& j) {
  evolution::ModelCard c;
  c.id = j.value("id", std::string("custom"));
  if (j.contains("hamiltonian_norm"))
    c.norms.hamiltonian_norm = j["hamiltonian_norm"].get<double>();
  else if (j.contains("hamiltonian"))
    c.norms.hamiltonian_norm = ops::norm_bound(operator_from_json(j["hamiltonian"]));
  else
    throw std::invalid_argument("model: hamiltonian_norm or hamiltonian required");
  if (j.contains("generator_norm_sq_sum")) {
    c.norms.generator_norm_sq_sum = j["generator_norm_sq_sum"].get<double>();
  } else {
    for (auto& g : j.value("generators", json::array())) {
      const double b = ops::norm_bound(operator_from_json(g));
      c.norms.generator_norm_sq_sum += b * b;
    }
  }
  c.cu = cost_from(j.at("cu"));
  c.cv = j.contains("cv") ? cost_from(j["cv"]) : gates::make_cost(0, 0);
  c.qubits = j.at("qubits").get<double>();
  c.t = j.value("t", c.t);
  c.eps = j.value("eps", c.eps);
  c.n_s = j.value("n_s", c.n_s);
  if (c.norms.hamiltonian_norm < 0 || c.norms.generator_norm_sq_sum < 0 || c.qubits <= 0)
    throw std::invalid_argument("model: norms must be nonnegative and qubits positive");
  return c;
}

json to_json(const ops::CliffordTableau& t) {
  const int n = t.width();
  json rows = json::array(), signs = json::array();
  for (int r = 0; r < 2 * n; ++r) {
    std::string s;
    for (int c = 0; c < 2 * n; ++c) s += t.bit(r, c) ? '1' : '0';
    rows.push_back(s);
    signs.push_back(t.sign(r));
  }
  return {{"n", n}, {"rows", rows}, {"signs", signs}};
}

ops::CliffordTableau tableau_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  ops::CliffordTableau t(n);
  const auto& rows = j.at("rows");
  const auto& signs = j.at("signs");
  if (static_cast<int>(rows.size()) != 2 * n || static_cast<int>(signs.size()) != 2 * n)
    throw std::invalid_argument("tableau: expected 2n rows");
  for (int r = 0; r < 2 * n; ++r) {
    const auto s = rows[r].get<std::string>();
    if (static_cast<int>(s.size()) != 2 * n) throw std::invalid_argument("tableau: row width");
    std::vector<std::uint8_t> bits(2 * n);
    for (int c = 0; c < 2 * n; ++c) bits[c] = s[c] == '1';
    t.set_row(r, bits, signs[r].get<int>());
  }
  if (!t.is_symplectic()) throw std::invalid_argument("tableau: not symplectic");
  return t;
}

json instance_to_json(const bench::ObfuscatedInstance& ob, bool include_answers) {
  json obs = json::array();
  for (auto& o : ob.observables) obs.push_back(to_json(o));
  json prep = json::array();
  for (auto& s : ob.prep_circuit) {
    if (s.kind == bench::PrepStep::Kind::clifford)
      prep.push_back({{"type", "clifford"}, {"tableau", to_json(s.tableau)}});
    else
      prep.push_back({{"type", "T"}, {"qubit", s.qubit}});
  }
  json j = {{"type", "planted-tfim"},
            {"n", ob.n},
            {"hamiltonian", to_json(ob.hamiltonian)},
            {"observables", obs},
            {"prep_circuit", prep},
            {"time", ob.time},
            {"seed", ob.seed},
            {"t_qubits", ob.t_qubits}};
  if (include_answers) j["answers"] = answers_to_json(ob);
  return j;
}

json answers_to_json(const bench::ObfuscatedInstance& ob) {
  json sites = json::array();
  for (auto& s : ob.observable_sites) sites.push_back({s[0], s[1]});
  return {{"seed", ob.seed}, {"answers", ob.sealed_answers}, {"observable_sites", sites}};
}

bench::ObfuscatedInstance instance_from_json(const json& j) {
  bench::ObfuscatedInstance ob;
  ob.n = j.at("n").get<int>();
  ob.hamiltonian = operator_from_json(j.at("hamiltonian"));
  for (auto& o : j.at("observables")) ob.observables.push_back(operator_from_json(o));
  for (auto& s : j.at("prep_circuit")) {
    const auto type = s.at("type").get<std::string>();
    if (type == "clifford")
      ob.prep_circuit.push_back({bench::PrepStep::Kind::clifford, tableau_from_json(s.at("tableau")), 0});
    else if (type == "T")
      ob.prep_circuit.push_back({bench::PrepStep::Kind::t_gate, {}, s.at("qubit").get<int>()});
    else
      throw std::invalid_argument("prep_circuit: unknown step type " + type);
  }
  ob.time = j.at("time").get<double>();
  ob.seed = j.value("seed", std::uint64_t{0});
  ob.t_qubits = j.value("t_qubits", std::vector<int>{});
  if (j.contains("answers")) {
    ob.sealed_answers = j["answers"].at("answers").get<std::vector<double>>();
    for (auto& s : j["answers"].value("observable_sites", json::array())) ob.observable_sites.push_back({s[0], s[1]});
  }
  return ob;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qlre::io
