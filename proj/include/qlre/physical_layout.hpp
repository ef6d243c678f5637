#pragma once

#include <stdexcept>
#include <string>

#include "qlre/evolution_estimator.hpp"

namespace qlre::physical {

struct FactoryParams {
  double t_states_per_cycle = 1;
  double qubits_per_factory = 0;  // 0: use fraction_of_total
  double fraction_of_total = 0.8 / 2.9;
};

struct HardwareParams {
  double p_phys = 1e-3;
  double cycle_time = 300e-9;  // seconds
  double p_threshold = 1e-2;
  double prefactor_a = 0.03;
  FactoryParams factory;

  void validate() const;
};

enum class Mode { sequential, parallel };
Mode mode_from_string(const std::string& s);
std::string to_string(Mode m);

struct PhysicalEstimate {
  int code_distance = 0;
  double runtime_seconds = 0;
  double physical_qubits = 0;
  double factory_qubits = 0;
  double achieved_logical_error = 0;
  Mode mode = Mode::sequential;
};

// Thrown when no odd d <= 99 meets the budget.
struct InfeasibleBudget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double logical_error_rate(int d, const HardwareParams& hw);
int select_code_distance(double logical_qubits, double logical_cycles, double budget, const HardwareParams& hw);
PhysicalEstimate footprint(const evolution::ResourceReport& report, const HardwareParams& hw, double budget,
                           Mode mode);

}  // namespace qlre::physical
