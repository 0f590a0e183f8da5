#pragma once

#include <string>

#include "cip/domain.hpp"
#include "cip/feasibility.hpp"
#include "cip/negotiation.hpp"
#include "cip/solver.hpp"

namespace cip {

/// Scenario interchange document:
/// {"w_levels", "theta_levels", "reward_rates", "t_min", "p", "q",
///  "true_types", "t_max", "beta", "v"}
/// p and q are arrays of rows; true_types is an array of [w_index,
/// theta_index] pairs (0-based).
std::string scenario_to_json(const Scenario& scenario);

/// Parses the scenario document. Throws std::invalid_argument on malformed
/// input or missing fields.
Scenario scenario_from_json(const std::string& text);

std::string validation_report_to_json(const ValidationReport& report);
std::string feasibility_report_to_json(const FeasibilityReport& report);

/// Combined `validate` output: the structural report plus, when structure
/// permits computing it, the scenario feasibility screen.
std::string scenario_report_to_json(const ValidationReport& validation,
                                    const FeasibilityReport* feasibility);
std::string solve_result_to_json(const SolveResult& result);
std::string trace_to_json(const NegotiationTrace& trace);

}  // namespace cip
