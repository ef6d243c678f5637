#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qlre::suites {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  nlohmann::json values = nlohmann::json::object();
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0;  // wall time, kept out of the JSON summary
  bool pass() const;
  nlohmann::json to_json() const;
};

// Worker count: QLRE_THREADS if set (>= 1), else hardware concurrency.
int worker_count();
void parallel_for(int count, const std::function<void(int)>& body);

struct ChannelStats {
  int triples = 0;
  int violations = 0;
  double worst_ratio = 0;  // max error / (5 delta^2)
  double slope = 0;        // log-log slope of the error over delta in [1e-3, 1e-1]
  double max_completeness_error = 0;
  double max_closed_form_error = 0;
};
ChannelStats channel_stats(int triples_per_delta = 100, std::uint64_t seed = 2024);

SuiteResult channel_suite();
SuiteResult trotter_suite();
SuiteResult gap_suite();
SuiteResult freefermion_suite();
SuiteResult obfuscation_suite();

const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name);

}  // namespace qlre::suites
