#include "qlre/physical_layout.hpp"

#include <cmath>
#include <stdexcept>

namespace qlre::physical {

void HardwareParams::validate() const {
  if (!(p_phys > 0 && cycle_time > 0 && p_threshold > 0 && prefactor_a > 0))
    throw std::invalid_argument("hardware parameters must be positive");
  if (!(p_phys < p_threshold)) throw std::invalid_argument("p_phys must be below p_threshold");
  if (!(factory.fraction_of_total >= 0 && factory.fraction_of_total < 1))
    throw std::invalid_argument("factory fraction must be in [0, 1)");
}

Mode mode_from_string(const std::string& s) {
  if (s == "sequential") return Mode::sequential;
  if (s == "parallel") return Mode::parallel;
  throw std::invalid_argument("unknown mode: " + s);
}

std::string to_string(Mode m) { return m == Mode::sequential ? "sequential" : "parallel"; }

double logical_error_rate(int d, const HardwareParams& hw) {
  return hw.prefactor_a * std::pow(hw.p_phys / hw.p_threshold, (d + 1) / 2.0);
}

int select_code_distance(double logical_qubits, double logical_cycles, double budget, const HardwareParams& hw) {
  if (!(budget > 0 && budget < 1)) throw std::invalid_argument("select_code_distance: budget in (0,1)");
  hw.validate();
  // relative slack so exact boundary cases (e.g. 0.1^3 vs 1e-3) are not lost to rounding
  const double target = budget / 3.0 * (1 + 1e-12);
  for (int d = 1; d <= 99; d += 2)
    if (logical_qubits * logical_cycles * logical_error_rate(d, hw) <= target) return d;
  throw InfeasibleBudget("no code distance <= 99 meets the error budget");
}

PhysicalEstimate footprint(const evolution::ResourceReport& report, const HardwareParams& hw, double budget,
                           Mode mode) {
  PhysicalEstimate e;
  e.mode = mode;
  // one logical cycle per T gate in the sequential schedule
  const double cycles = std::max(report.t_count, 1.0);
  e.code_distance = select_code_distance(std::max(report.qubits, 1.0), cycles, budget, hw);
  const int d = e.code_distance;
  e.achieved_logical_error = std::max(report.qubits, 1.0) * cycles * logical_error_rate(d, hw);
  e.runtime_seconds = report.t_count * d * hw.cycle_time / hw.factory.t_states_per_cycle;
  if (mode == Mode::parallel) {
    if (!(report.parallelism_k > 0)) throw std::invalid_argument("footprint: parallel mode needs k > 0");
    e.runtime_seconds /= report.parallelism_k;
  }
  const double data = 2.0 * report.qubits * 2.0 * d * d;
  if (hw.factory.qubits_per_factory > 0)
    e.factory_qubits = hw.factory.qubits_per_factory;
  else
    e.factory_qubits = data * hw.factory.fraction_of_total / (1.0 - hw.factory.fraction_of_total);
  e.physical_qubits = data + e.factory_qubits;
  return e;
}

}  // namespace qlre::physical
