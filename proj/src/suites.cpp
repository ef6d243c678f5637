#include "qlre/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "qlre/benchmark_factory.hpp"
#include "qlre/lattice_models.hpp"
#include "qlre/lindblad_kernel.hpp"

namespace qlre::suites {

using lindblad::Mat;
using nlohmann::json;
using ops::cplx;
using ops::OperatorSum;

bool SuiteResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.pass; });
}

json SuiteResult::to_json() const {
  json cs = json::array();
  for (auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"values", c.values}});
  return {{"suite", suite}, {"pass", pass()}, {"checks", cs}};
}

int worker_count() {
  if (const char* s = std::getenv("QLRE_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(worker_count(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lk(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <class F>
SuiteResult timed(const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.suite = name;
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random local operator on one or two qubits with norm bound <= scale.
OperatorSum random_local(int n, std::mt19937_64& rng, double scale) {
  std::uniform_int_distribution<int> site(0, n - 1), width(1, 2);
  std::normal_distribution<double> g;
  std::vector<int> support{site(rng)};
  if (width(rng) == 2 && n > 1) {
    int s2;
    do s2 = site(rng);
    while (s2 == support[0]);
    support.push_back(s2);
  }
  std::vector<ops::PauliTerm> terms;
  const int count = 1 << (2 * support.size());
  double l1 = 0;
  for (int idx = 0; idx < count; ++idx) {
    std::vector<std::pair<std::uint32_t, ops::Letter>> letters;
    for (std::size_t k = 0; k < support.size(); ++k) {
      auto l = static_cast<ops::Letter>((idx >> (2 * k)) & 3);
      if (l != ops::Letter::I) letters.emplace_back(support[k], l);
    }
    const cplx c{g(rng), g(rng)};
    l1 += std::abs(c);
    terms.push_back({c, ops::PauliString(letters)});
  }
  return OperatorSum(n, terms) * cplx(scale / l1);
}

lindblad::LindbladSpec random_trotter_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr int n = 3;
  std::uniform_real_distribution<double> coef(-1.0, 1.0), scale(0.3, 1.0);
  std::uniform_int_distribution<int> letter(1, 3), site(0, n - 1);
  std::vector<ops::PauliTerm> h;
  for (int k = 0; k < 4; ++k) {
    std::vector<std::pair<std::uint32_t, ops::Letter>> letters{
        {static_cast<std::uint32_t>(site(rng)), static_cast<ops::Letter>(letter(rng))}};
    if (k % 2) {
      auto q = static_cast<std::uint32_t>(site(rng));
      if (q != letters[0].first) letters.emplace_back(q, static_cast<ops::Letter>(letter(rng)));
    }
    h.push_back({coef(rng), ops::PauliString(letters)});
  }
  lindblad::LindbladSpec s;
  s.hamiltonian = OperatorSum(n, h);
  s.convention = lindblad::RateConvention::half;
  for (int k = 0; k < 3; ++k) s.generators.push_back({1.0, random_local(n, rng, scale(rng))});
  return s;
}

}  // namespace

ChannelStats channel_stats(int triples_per_delta, std::uint64_t seed) {
  ChannelStats st;
  const std::vector<double> deltas{0.5, 0.1, 0.01};
  const int total = triples_per_delta * static_cast<int>(deltas.size());
  struct Row {
    double ratio = 0, completeness = 0, closed = 0;
  };
  std::vector<Row> rows(total);
  parallel_for(total, [&](int idx) {
    const double delta = deltas[idx / triples_per_delta];
    std::mt19937_64 rng(seed + 7919 * static_cast<std::uint64_t>(idx));
    const int nq = 1 + static_cast<int>(rng() % 3);
    const int d = 1 << nq;
    const Mat L = lindblad::random_contraction(d, rng);
    const Mat rho = lindblad::random_density_matrix(d, rng);
    const auto w = lindblad::weak_channel(L, delta);
    const auto exact = lindblad::QuantumChannel::exp_generator(lindblad::dissipator_superop(L, 1.0), delta);
    const Mat out = w.channel.apply(rho);
    rows[idx].ratio = lindblad::trace_norm(out - exact.apply(rho)) / (5 * delta * delta);
    rows[idx].completeness = w.completeness_error;
    rows[idx].closed = (out - lindblad::weak_channel_closed_form(L, delta, rho)).cwiseAbs().maxCoeff();
  });
  for (auto& r : rows) {
    ++st.triples;
    if (r.ratio > 1.0) ++st.violations;
    st.worst_ratio = std::max(st.worst_ratio, r.ratio);
    st.max_completeness_error = std::max(st.max_completeness_error, r.completeness);
    st.max_closed_form_error = std::max(st.max_closed_form_error, r.closed);
  }
  // slope: one fixed (L, rho) per qubit count, delta on a log grid in [1e-3, 1e-1]
  std::vector<double> slopes;
  for (int nq = 1; nq <= 3; ++nq) {
    std::mt19937_64 rng(seed + 101 * nq);
    const int d = 1 << nq;
    const Mat L = lindblad::random_contraction(d, rng);
    const Mat rho = lindblad::random_density_matrix(d, rng);
    std::vector<double> xs, ys;
    for (int k = 0; k <= 8; ++k) {
      const double delta = std::pow(10.0, -3.0 + 0.25 * k);
      const auto w = lindblad::weak_channel(L, delta);
      const auto exact = lindblad::QuantumChannel::exp_generator(lindblad::dissipator_superop(L, 1.0), delta);
      xs.push_back(delta);
      ys.push_back(lindblad::trace_norm(w.channel.apply(rho) - exact.apply(rho)));
    }
    slopes.push_back(slope_fit(xs, ys));
  }
  st.slope = *std::max_element(slopes.begin(), slopes.end(),
                               [](double a, double b) { return std::abs(a - 2) < std::abs(b - 2); });
  return st;
}

SuiteResult channel_suite() {
  return timed("channel", [](SuiteResult& r) {
    const ChannelStats st = channel_stats();
    r.checks.push_back({"five_delta_squared_bound", st.violations == 0,
                        std::to_string(st.triples) + " triples, worst error/(5 delta^2) = " + fmt(st.worst_ratio),
                        {{"triples", st.triples}, {"violations", st.violations}, {"worst_ratio", st.worst_ratio}}});
    r.checks.push_back({"loglog_slope", std::abs(st.slope - 2.0) <= 0.1, "worst slope " + fmt(st.slope),
                        {{"slope", st.slope}}});
    r.checks.push_back({"kraus_completeness", st.max_completeness_error <= 1e-12,
                        "max |sum K^dag K - I| = " + fmt(st.max_completeness_error),
                        {{"error", st.max_completeness_error}}});
    r.checks.push_back({"closed_form", st.max_closed_form_error <= 1e-12,
                        "max entry difference " + fmt(st.max_closed_form_error),
                        {{"error", st.max_closed_form_error}}});
  });
}

SuiteResult trotter_suite() {
  return timed("trotter", [](SuiteResult& r) {
    const std::vector<double> deltas{1e-2, 1e-3};
    const int specs = 20;
    std::vector<lindblad::TrotterCheck> res(specs * deltas.size());
    parallel_for(static_cast<int>(res.size()), [&](int idx) {
      const auto spec = random_trotter_spec(5000 + idx % specs);
      res[idx] = lindblad::verify_trotter_bound(spec, deltas[idx / specs], lindblad::disjoint_support_groups(spec));
    });
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      int passed = 0;
      double worst = 0, worst_weak = 0;
      for (int s = 0; s < specs; ++s) {
        const auto& c = res[k * specs + s];
        passed += c.pass;
        worst = std::max(worst, c.lhs_exact / c.rhs);
        worst_weak = std::max(worst_weak, c.lhs_weak / (c.rhs + c.weak_allowance));
      }
      r.checks.push_back({"trotter_bound_delta_" + fmt(deltas[k]), passed == specs,
                          std::to_string(passed) + "/" + std::to_string(specs) + " pass, worst lhs/rhs " + fmt(worst) +
                              ", weak " + fmt(worst_weak),
                          {{"passed", passed}, {"worst_ratio", worst}, {"worst_weak_ratio", worst_weak}}});
    }
  });
}

SuiteResult gap_suite() {
  return timed("gap", [](SuiteResult& r) {
    const std::vector<int> ns{4, 5, 6};
    std::vector<lindblad::CurrentProfile> cur(ns.size());
    std::vector<double> residual(ns.size()), validity(ns.size());
    parallel_for(static_cast<int>(ns.size()), [&](int k) {
      bench::ProsenParams p;
      p.n = ns[k];
      const auto spec = bench::prosen_instance(p);
      const auto rho = lindblad::steady_state(spec);
      residual[k] = lindblad::apply_rhs(spec, rho.data).norm();
      validity[k] = rho.valid(1e-10) ? 1.0 : 0.0;
      cur[k] = lindblad::measure_currents(p.chain(), rho.data);
    });
    const double max_res = *std::max_element(residual.begin(), residual.end());
    const bool all_valid = std::all_of(validity.begin(), validity.end(), [](double v) { return v == 1.0; });
    r.checks.push_back({"ness_residual", max_res <= 1e-10 && all_valid,
                        "max ||L rho|| = " + fmt(max_res) + (all_valid ? "" : ", invalid density matrix"),
                        {{"residual", max_res}}});

    double spread = 0, max_imag = 0;
    for (auto& c : cur) {
      max_imag = std::max(max_imag, c.max_imag);
      for (auto* v : {&c.spin, &c.energy}) {
        if (v->size() < 4) continue;  // need at least two interior bonds
        auto [lo, hi] = std::minmax_element(v->begin() + 1, v->end() - 1);
        spread = std::max(spread, *hi - *lo);
      }
    }
    r.checks.push_back({"bulk_current_uniformity", spread <= 1e-8 && max_imag <= 1e-10,
                        "interior bond spread " + fmt(spread), {{"spread", spread}, {"max_imag", max_imag}}});

    json s_avg = json::array(), q_avg = json::array();
    bool mono = true;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      s_avg.push_back(cur[k].spin_avg);
      q_avg.push_back(cur[k].energy_avg);
      const double s = std::abs(cur[k].spin_avg), q = std::abs(cur[k].energy_avg);
      if (s >= 0.12 || q >= 0.35) mono = false;
      if (k > 0 && (s <= std::abs(cur[k - 1].spin_avg) || q <= std::abs(cur[k - 1].energy_avg))) mono = false;
    }
    r.checks.push_back({"currents_monotone", mono, "|S| and |Q| increase with n and stay below 0.12 / 0.35",
                        {{"n", ns}, {"spin_avg", s_avg}, {"energy_avg", q_avg}}});

    const auto fit = bench::gap_law_fit(ns);
    const auto half = bench::gap_law_fit(ns, lindblad::RateConvention::half);
    bool decreasing = true;
    for (std::size_t k = 0; k < fit.gap.size(); ++k)
      if (!(fit.gap[k] > 0) || (k > 0 && fit.gap[k] >= fit.gap[k - 1])) decreasing = false;
    r.checks.push_back({"gap_law_fit", fit.coefficient >= 8 && fit.coefficient <= 14,
                        "c = " + fmt(fit.coefficient) + " (half convention " + fmt(half.coefficient) + ")",
                        {{"coefficient", fit.coefficient}, {"gaps", fit.gap}, {"half_coefficient", half.coefficient},
                         {"half_gaps", half.gap}}});
    r.checks.push_back({"gap_positive_decreasing", decreasing, "gaps " + fmt(fit.gap.front()) + " .. " + fmt(fit.gap.back()),
                        {{"gaps", fit.gap}}});
  });
}

SuiteResult freefermion_suite() {
  return timed("freefermion", [](SuiteResult& r) {
    const std::vector<int> ns{2, 3, 4, 6, 8, 10};
    const std::vector<double> ts{0.0, 0.1, 1.0, 5.0};
    const int jobs = static_cast<int>(ns.size() * ts.size());
    std::vector<double> err(jobs, 0.0), t0max(jobs, 0.0);
    std::vector<int> pairs(jobs, 0);
    parallel_for(jobs, [&](int idx) {
      const int n = ns[idx / ts.size()];
      const double t = ts[idx % ts.size()];
      const auto inst = bench::TfimInstance::with_all_pairs(n, t);
      const auto dense = bench::dense_correlators(inst, t);
      for (auto& [i, j] : inst.observables) {
        const double ff = bench::free_fermion_correlator(inst, i, j, t);
        err[idx] = std::max(err[idx], std::abs(ff - dense(i, j)));
        if (t == 0) t0max[idx] = std::max(t0max[idx], std::abs(ff));
        ++pairs[idx];
      }
    });
    const double worst = *std::max_element(err.begin(), err.end());
    const double worst0 = *std::max_element(t0max.begin(), t0max.end());
    int total = 0;
    for (int p : pairs) total += p;
    r.checks.push_back({"dense_agreement", worst <= 1e-8,
                        std::to_string(total) + " (n, i, j, t) points, max |diff| = " + fmt(worst),
                        {{"points", total}, {"max_error", worst}}});
    r.checks.push_back({"t0_exact_zero", worst0 == 0.0, "max |<Z_i Z_j>(0)| = " + fmt(worst0), {{"max", worst0}}});

    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    double pf_err = 0;
    for (int k = 0; k < 50; ++k) {
      const int m = 2 * (1 + k % 6);
      lindblad::RealMat A(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = g(rng);
      const lindblad::RealMat B = A - A.transpose();
      const double det = B.determinant(), pf = bench::pfaffian(B);
      pf_err = std::max(pf_err, std::abs(pf * pf - det) / std::max(1.0, std::abs(det)));
    }
    r.checks.push_back({"pfaffian_identity", pf_err <= 1e-10, "max relative |Pf^2 - det| = " + fmt(pf_err),
                        {{"error", pf_err}}});
  });
}

SuiteResult obfuscation_suite() {
  return timed("obfuscation", [](SuiteResult& r) {
    struct Job {
      int n, nt;
    };
    std::vector<Job> jobs;
    for (int n = 4; n <= 8; ++n)
      for (int nt : {0, 1, 2}) jobs.push_back({n, nt});
    std::vector<bench::DenseCheck> res(jobs.size());
    std::vector<int> term_ok(jobs.size(), 0);
    parallel_for(static_cast<int>(jobs.size()), [&](int k) {
      const auto inst = bench::TfimInstance::with_all_pairs(jobs[k].n, 1.0);
      const auto ob = bench::obfuscate(inst, jobs[k].nt, 1000 + k);
      res[k] = bench::dense_check(inst, ob);
      term_ok[k] = ob.hamiltonian.size() <= (inst.hamiltonian().size() << jobs[k].nt);
    });
    double ans = 0, spec = 0, prep = 0;
    for (auto& d : res) {
      ans = std::max(ans, d.max_answer_error);
      spec = std::max(spec, d.spectrum_error);
      prep = std::max(prep, d.prep_state_error);
    }
    r.checks.push_back({"sealed_answers", ans <= 1e-10, "max |dense - sealed| = " + fmt(ans) + " over n = 4..8",
                        {{"max_error", ans}}});
    r.checks.push_back({"spectrum_preserved", spec <= 1e-10, "max eigenvalue shift " + fmt(spec),
                        {{"max_error", spec}}});
    r.checks.push_back({"prep_circuit", prep <= 1e-12 && std::all_of(term_ok.begin(), term_ok.end(), [](int v) { return v; }),
                        "prep state error " + fmt(prep) + ", term counts within 2^n_t", {{"prep_error", prep}}});

    {
      const auto inst = bench::TfimInstance::with_all_pairs(5, 0.7);
      const auto ob = bench::obfuscate_with(inst, {}, ops::CliffordTableau(5));
      const bool same = (ob.hamiltonian - inst.hamiltonian()).empty();
      r.checks.push_back({"identity_obfuscation", same, same ? "unchanged" : "changed", json::object()});
    }

    bool clifford_ok = true;
    for (int n = 2; n <= 4; ++n) {
      const auto h = models::tfim_hamiltonian(n);
      const auto base = bench::dla_dimension(h).dimension;
      for (int s = 0; s < 20; ++s)
        if (bench::dla_dimension(ops::conjugate_by_clifford(ops::random_clifford(n, 77 + 31 * s + n), h)).dimension != base)
          clifford_ok = false;
    }
    r.checks.push_back({"dla_clifford_invariant", clifford_ok, "n = 2..4, 20 random tableaux each", json::object()});

    json plain = json::array(), with_t = json::array(), random_t = json::array();
    bool increased = true;
    std::vector<double> dp, dt;
    for (int n = 3; n <= 5; ++n) {
      const auto inst = bench::TfimInstance::with_all_pairs(n, 1.0);
      const auto p = bench::dla_dimension(inst.hamiltonian()).dimension;
      const auto t0 = bench::dla_dimension(
                          bench::obfuscate_with(inst, {0}, ops::random_clifford(n, 5 + n)).hamiltonian)
                          .dimension;
      const auto tr = bench::dla_dimension(bench::obfuscate(inst, 1, 300 + n).hamiltonian).dimension;
      plain.push_back(p);
      with_t.push_back(t0);
      random_t.push_back(tr);
      dp.push_back(static_cast<double>(p));
      dt.push_back(static_cast<double>(t0));
      if (!(t0 > p && tr > p)) increased = false;
    }
    bool growth = true;
    for (std::size_t k = 1; k < dp.size(); ++k)
      if (!(dt[k] - dt[k - 1] > dp[k] - dp[k - 1])) growth = false;
    r.checks.push_back({"dla_t_gate_growth", increased && growth,
                        "plain " + plain.dump() + ", one T on q0 " + with_t.dump() + ", random T " + random_t.dump(),
                        {{"plain", plain}, {"t_q0", with_t}, {"t_random", random_t}}});
  });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"channel", "trotter", "gap", "freefermion", "obfuscation"};
  return names;
}

SuiteResult run_suite(const std::string& name) {
  if (name == "channel") return channel_suite();
  if (name == "trotter") return trotter_suite();
  if (name == "gap") return gap_suite();
  if (name == "freefermion") return freefermion_suite();
  if (name == "obfuscation") return obfuscation_suite();
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace qlre::suites
