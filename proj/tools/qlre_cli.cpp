// qlre: resource estimates, footprints, verification suites, benchmark instances.
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlre/benchmark_factory.hpp"
#include "qlre/evolution_estimator.hpp"
#include "qlre/json_io.hpp"
#include "qlre/lindblad_kernel.hpp"
#include "qlre/physical_layout.hpp"
#include "qlre/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qlre;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadInput = 2;
constexpr int kInfeasible = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "out/report.json" -> "out/report"; "out/report" unchanged.
std::string stem_of(const std::string& path) {
  fs::path p(path);
  if (p.extension() == ".json") p.replace_extension();
  return p.string();
}

void ensure_parent(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

struct EstimateArgs {
  std::string model;
  std::string method = "qsp";
  std::optional<double> eps;
  std::optional<double> t;
  std::optional<int> n_s;
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  evolution::ModelCard card;
  if (evolution::is_builtin_model(a.model)) {
    card = evolution::builtin_model(a.model);
  } else {
    if (!fs::exists(a.model)) throw UsageError("unknown model or missing model file: " + a.model);
    card = io::model_from_json(io::read_json_file(a.model));
  }
  evolution::EstimateRequest req;
  req.model = card.id;
  req.method = evolution::method_from_string(a.method);
  req.eps = a.eps ? *a.eps : card.eps;
  req.t = a.t ? *a.t : card.t;
  req.n_s = a.n_s ? *a.n_s : card.n_s;
  if (!req.valid()) throw UsageError("invalid request: need t > 0, eps in (0, 1), n_s >= 1");

  evolution::ResourceReport rep;
  if (req.method == evolution::Method::qsp) {
    rep = evolution::qsp_resources(req, card);
  } else {
    if (!card.supports_trotter) throw UsageError("model " + card.id + " has no Trotter layout");
    rep = evolution::trotter_resources(evolution::ca_trotter_layout(), req.t, req.eps);
    rep.model = card.id;
  }
  const std::string text = io::dump(io::to_json(rep));
  if (!a.out.empty()) {
    const auto stem = stem_of(a.out);
    ensure_parent(stem);
    io::write_text_file(stem + ".json", text);
    io::write_text_file(stem + ".csv", io::report_to_csv(rep));
  }
  std::cout << text;
  return kOk;
}

struct PhysicalArgs {
  std::string report;
  std::string hardware;
  std::string mode = "sequential";
  double budget = 0.01;
  std::string out;
};

int run_physical(const PhysicalArgs& a) {
  if (!fs::exists(a.report)) throw UsageError("missing report file: " + a.report);
  const auto rep = io::report_from_json(io::read_json_file(a.report));
  physical::HardwareParams hw;
  if (!a.hardware.empty()) {
    if (!fs::exists(a.hardware)) throw UsageError("missing hardware file: " + a.hardware);
    hw = io::hardware_from_json(io::read_json_file(a.hardware));
  }
  if (!(a.budget > 0 && a.budget < 1)) throw UsageError("--budget must lie in (0, 1)");
  physical::PhysicalEstimate est;
  try {
    est = physical::footprint(rep, hw, a.budget, physical::mode_from_string(a.mode));
  } catch (const physical::InfeasibleBudget& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  }
  json j = io::to_json(est);
  j["model"] = rep.model;
  j["method"] = evolution::to_string(rep.method);
  j["budget"] = a.budget;
  j["hardware"] = io::to_json(hw);
  const std::string text = io::dump(j);
  if (!a.out.empty()) {
    ensure_parent(a.out);
    io::write_text_file(a.out, text);
  }
  std::cout << text;
  return kOk;
}

int run_verify(const std::string& which, const std::string& out) {
  std::vector<std::string> names;
  if (which == "all") {
    names = suites::suite_names();
  } else {
    const auto& known = suites::suite_names();
    if (std::find(known.begin(), known.end(), which) == known.end()) throw UsageError("unknown suite: " + which);
    names = {which};
  }
  json all = json::array();
  bool pass = true;
  for (auto& n : names) {
    const auto r = suites::run_suite(n);
    pass = pass && r.pass();
    all.push_back(r.to_json());
    std::cerr << std::fixed << std::setprecision(2) << "[" << n << "] " << (r.pass() ? "pass" : "FAIL") << " in "
              << r.seconds << " s\n";
    for (auto& c : r.checks)
      if (!c.pass) std::cerr << "  " << c.name << ": " << c.detail << "\n";
  }
  const std::string text = io::dump({{"pass", pass}, {"suites", all}});
  if (!out.empty()) {
    ensure_parent(out);
    io::write_text_file(out, text);
  }
  std::cout << text;
  return pass ? kOk : kVerifyFailed;
}

struct BenchArgs {
  std::string type = "planted-tfim";
  int n = 8;
  int t_gates = 1;
  std::uint64_t seed = 1;
  double time = 1.0;
  bool seal = false;
  std::string out;
};

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

int run_bench_planted(const BenchArgs& a) {
  if (a.n < 2) throw UsageError("--n must be at least 2");
  if (a.t_gates < 0 || a.t_gates > a.n) throw UsageError("--t-gates must lie in [0, n]");
  if (a.seal && a.out.empty()) throw UsageError("--seal needs --out");
  const auto inst = bench::TfimInstance::with_all_pairs(a.n, a.time);
  const auto ob = bench::obfuscate(inst, a.t_gates, a.seed);
  const std::string text = io::dump(io::instance_to_json(ob, !a.seal));
  if (a.out.empty()) {
    std::cout << text;
    return kOk;
  }
  const auto stem = stem_of(a.out);
  ensure_parent(stem);
  io::write_text_file(stem + ".json", text);
  if (a.seal) io::write_text_file(stem + ".answers.json", io::dump(io::answers_to_json(ob)));
  std::cout << stem << ".json" << (a.seal ? " (answers sealed in " + stem + ".answers.json)" : "") << "\n";
  return kOk;
}

int run_bench_prosen(const BenchArgs& a) {
  bench::ProsenParams p;
  p.n = a.n;
  p.validate();
  if (p.n > lindblad::kStateGuard) throw UsageError("prosen steady state limited to n <= 7");
  const auto spec = bench::prosen_instance(p);
  const auto rho = lindblad::steady_state(spec);
  const auto cur = lindblad::measure_currents(p.chain(), rho.data);

  json params = {{"n", p.n},
                 {"J", p.J},
                 {"h", p.h},
                 {"gamma_left_minus", p.gamma_left_minus},
                 {"gamma_left_plus", p.gamma_left_plus},
                 {"gamma_right_minus", p.gamma_right_minus},
                 {"gamma_right_plus", p.gamma_right_plus},
                 {"frame", bench::to_string(p.frame)}};
  json j = io::to_json(spec);
  j["type"] = "prosen";
  j["params"] = params;
  j["ness"] = {{"spin_current", cur.spin},
               {"energy_current", cur.energy},
               {"spin_avg", cur.spin_avg},
               {"energy_avg", cur.energy_avg}};
  const std::string text = io::dump(j);

  std::ostringstream currents;
  currents << "bond,spin_current,energy_current\n";
  for (std::size_t m = 0; m < cur.spin.size(); ++m)
    currents << m << ',' << csv_number(cur.spin[m]) << ','
             << (m < cur.energy.size() ? csv_number(cur.energy[m]) : std::string()) << '\n';
  std::ostringstream ness;
  ness << "row,col,re,im\n";
  for (int c = 0; c < rho.data.cols(); ++c)
    for (int r = 0; r < rho.data.rows(); ++r)
      ness << r << ',' << c << ',' << csv_number(rho.data(r, c).real()) << ',' << csv_number(rho.data(r, c).imag())
           << '\n';

  if (a.out.empty()) {
    std::cout << text;
    return kOk;
  }
  const auto stem = stem_of(a.out);
  ensure_parent(stem);
  io::write_text_file(stem + ".json", text);
  io::write_text_file(stem + ".currents.csv", currents.str());
  io::write_text_file(stem + ".ness.csv", ness.str());
  std::cout << stem << ".json\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Lindbladian resource estimator"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Logical resource report for a model");
  e->add_option("--model", est.model, "Built-in model id (ca3co2o6, hubbard-10x10) or model JSON file")->required();
  e->add_option("--method", est.method, "qsp or trotter")->check(CLI::IsMember({"qsp", "trotter"}));
  e->add_option("--eps", est.eps, "Target precision in (0, 1)");
  e->add_option("--t", est.t, "Evolution time (default from the model)");
  e->add_option("--n-s", est.n_s, "Number of samples");
  e->add_option("--out", est.out, "Write <out>.json and <out>.csv");

  PhysicalArgs phys;
  auto* p = app.add_subcommand("physical", "Surface-code footprint for a report");
  p->add_option("--report", phys.report, "Report JSON from estimate")->required();
  p->add_option("--hardware", phys.hardware, "Hardware parameter JSON");
  p->add_option("--mode", phys.mode, "sequential or parallel")->check(CLI::IsMember({"sequential", "parallel"}));
  p->add_option("--budget", phys.budget, "Total logical failure budget");
  p->add_option("--out", phys.out, "Output JSON path");

  std::string suite = "all", verify_out;
  auto* v = app.add_subcommand("verify", "Run invariant suites");
  v->add_option("--suite", suite, "channel|trotter|gap|freefermion|obfuscation|all");
  v->add_option("--out", verify_out, "Write the JSON summary here too");

  BenchArgs bench_args;
  auto* b = app.add_subcommand("bench", "Benchmark instances");
  b->require_subcommand(1);
  auto* g = b->add_subcommand("gen", "Generate an instance");
  g->add_option("--type", bench_args.type, "planted-tfim or prosen")->check(CLI::IsMember({"planted-tfim", "prosen"}));
  g->add_option("--n", bench_args.n, "Number of qubits");
  g->add_option("--t-gates", bench_args.t_gates, "T gates inserted by the obfuscation");
  g->add_option("--seed", bench_args.seed, "RNG seed");
  g->add_option("--time", bench_args.time, "Evolution time of the correlators");
  g->add_flag("--seal", bench_args.seal, "Write answers to a separate file");
  g->add_option("--out", bench_args.out, "Output path stem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*e) return run_estimate(est);
    if (*p) return run_physical(phys);
    if (*v) return run_verify(suite, verify_out);
    if (*g) return bench_args.type == "prosen" ? run_bench_prosen(bench_args) : run_bench_planted(bench_args);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kBadInput;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "error: malformed JSON: " << err.what() << "\n";
    return kBadInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 4;
  }
  return kOk;
}
