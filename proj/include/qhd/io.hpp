#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "qhd/engine.hpp"
#include "qhd/harness.hpp"
#include "qhd/observables.hpp"

namespace qhd {

using nlohmann::json;

void write_run_trace_csv(std::ostream& out, const RunTrace& trace);
void write_field_csv(std::ostream& out, const ProbabilityField& field);
void write_wavefunction_csv(std::ostream& out, const WaveFunction& psi);
void write_lyapunov_csv(std::ostream& out, const LyapunovTrace& trace);
void write_trajectory_csv(std::ostream& out,
                          const std::vector<std::pair<Point, double>>& trajectory);
void write_report_csv(std::ostream& out, const BestOfKReport& report);

json report_to_json(const BestOfKReport& report);
json run_trace_to_json(const RunTrace& trace);
json fit_to_json(const FitResult& fit);

/// Engine config document. Keys: function, L, N, h, K (or T), schedule
/// {kind, mu|alpha}, t_start, initial_state, seed. Missing keys keep the
/// supplied defaults.
QHDConfig qhd_config_from_json(const json& doc, const QHDConfig& defaults);

SuitePlan plan_from_json(const json& doc);

/// Shortest decimal that round-trips a double.
std::string format_double(double v);

}  // namespace qhd
