#pragma once

#include "json.hpp"
#include <string>

#include "qlre/benchmark_factory.hpp"
#include "qlre/evolution_estimator.hpp"
#include "qlre/lindblad_kernel.hpp"
#include "qlre/physical_layout.hpp"

namespace qlre::io {

using nlohmann::json;

// {"n": 3, "terms": [{"c": [re, im], "p": {"0": "X", "2": "Z"}}]}
json to_json(const ops::OperatorSum& a);
ops::OperatorSum operator_from_json(const json& j);

// OperatorSum schema plus "generators": [{"amplitude": [re, im], "op": {...}}] and "convention".
json to_json(const lindblad::LindbladSpec& s);
lindblad::LindbladSpec spec_from_json(const json& j);

json to_json(const evolution::ResourceReport& r);
evolution::ResourceReport report_from_json(const json& j);
std::string report_to_csv(const evolution::ResourceReport& r);

// {"p_phys":1e-3,"cycle_ns":300,"p_th":1e-2,"a":0.03,"factory_fraction":0.276,"t_states_per_cycle":1}
physical::HardwareParams hardware_from_json(const json& j);
json to_json(const physical::HardwareParams& hw);
json to_json(const physical::PhysicalEstimate& e);

// Custom model card: either explicit norms or operators to bound.
//   {"id": "...", "hamiltonian_norm": x | "hamiltonian": {...},
//    "generator_norm_sq_sum": y | "generators": [{...}],
//    "cu": {"t": .., "depth": ..}, "cv": {...}, "qubits": .., "t": .., "eps": .., "n_s": ..}
evolution::ModelCard model_from_json(const json& j);

json to_json(const ops::CliffordTableau& t);
ops::CliffordTableau tableau_from_json(const json& j);
json instance_to_json(const bench::ObfuscatedInstance& ob, bool include_answers);
json answers_to_json(const bench::ObfuscatedInstance& ob);
bench::ObfuscatedInstance instance_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump(const json& j);  // canonical text form, trailing newline

}  // namespace qlre::io
