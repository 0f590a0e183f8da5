#include "cip/json_io.hpp"

#include <stdexcept>

#include <json.hpp>

namespace cip {

namespace {

using nlohmann::json;

json menu_to_json(const ContractMenu& menu) {
  json entries = json::array();
  for (const ContractEntry& e : menu.entries) {
    entries.push_back({{"ci", e.ci},
                       {"w_index", e.assigned.w_index},
                       {"theta_index", e.assigned.theta_index},
                       {"resources", e.resources},
                       {"reward", e.reward}});
  }
  return entries;
}

const char* event_kind_name(NegotiationEvent::Kind kind) {
  switch (kind) {
    case NegotiationEvent::Kind::Declared: return "declared";
    case NegotiationEvent::Kind::RequestsReceived: return "requests_received";
    case NegotiationEvent::Kind::SolveAttempt: return "solve_attempt";
    case NegotiationEvent::Kind::Excluded: return "excluded";
    case NegotiationEvent::Kind::Readmitted: return "readmitted";
    case NegotiationEvent::Kind::Offered: return "offered";
    case NegotiationEvent::Kind::Choice: return "choice";
    case NegotiationEvent::Kind::Signed: return "signed";
  }
  return "unknown";
}

}  // namespace

std::string scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["w_levels"] = scenario.ladder.w_levels;
  doc["theta_levels"] = scenario.ladder.theta_levels;
  doc["reward_rates"] = scenario.ladder.reward_rates;
  doc["t_min"] = scenario.ladder.t_min;
  doc["p"] = scenario.beliefs.p;
  doc["q"] = scenario.beliefs.q;
  json types = json::array();
  for (const TypePair& t : scenario.true_types)
    types.push_back({t.w_index, t.theta_index});
  doc["true_types"] = types;
  doc["t_max"] = scenario.t_max;
  doc["beta"] = scenario.beta;
  doc["v"] = scenario.v;
  return doc.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("scenario JSON parse error: ") + err.what());
  }
  try {
    Scenario scenario;
    scenario.ladder.w_levels = doc.at("w_levels").get<std::vector<double>>();
    scenario.ladder.theta_levels = doc.at("theta_levels").get<std::vector<double>>();
    scenario.ladder.reward_rates = doc.at("reward_rates").get<std::vector<double>>();
    scenario.ladder.t_min = doc.at("t_min").get<std::vector<double>>();
    scenario.beliefs.p = doc.at("p").get<std::vector<std::vector<double>>>();
    scenario.beliefs.q = doc.at("q").get<std::vector<std::vector<double>>>();
    for (const json& pair : doc.at("true_types")) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("true_types entries must be [w_index, theta_index]");
      scenario.true_types.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    scenario.t_max = doc.at("t_max").get<double>();
    scenario.beta = doc.at("beta").get<double>();
    scenario.v = doc.at("v").get<double>();
    return scenario;
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("scenario JSON field error: ") + err.what());
  }
}

std::string validation_report_to_json(const ValidationReport& report) {
  json doc;
  doc["ok"] = report.ok;
  doc["violations"] = report.violations;
  return doc.dump(2) + "\n";
}

namespace {

json feasibility_to_json_value(const FeasibilityReport& report) {
  json doc;
  doc["satisfied"] = report.satisfied;
  json violations = json::array();
  for (const Violation& v : report.violations)
    violations.push_back(
        {{"label", v.label}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"slack", v.slack}});
  doc["violations"] = violations;
  return doc;
}

}  // namespace

std::string feasibility_report_to_json(const FeasibilityReport& report) {
  return feasibility_to_json_value(report).dump(2) + "\n";
}

std::string scenario_report_to_json(const ValidationReport& validation,
                                    const FeasibilityReport* feasibility) {
  json doc;
  doc["ok"] = validation.ok && (feasibility == nullptr || feasibility->satisfied);
  doc["violations"] = validation.violations;
  if (feasibility != nullptr) doc["feasibility"] = feasibility_to_json_value(*feasibility);
  return doc.dump(2) + "\n";
}

std::string solve_result_to_json(const SolveResult& result) {
  json doc;
  doc["status"] = result.status == SolveStatus::Optimal ? "optimal" : "infeasible";
  if (!result.reason.empty()) doc["reason"] = result.reason;
  doc["objective"] = result.objective;
  doc["menu"] = menu_to_json(result.menu);
  json diag;
  diag["available"] = result.diagnostics.available;
  if (result.diagnostics.available) {
    diag["lambda"] = result.diagnostics.lambda;
    json mu = json::array();
    for (std::size_t i = 0; i < result.diagnostics.mu.size(); ++i)
      mu.push_back({{"label", result.diagnostics.mu_labels[i]},
                    {"value", result.diagnostics.mu[i]}});
    diag["mu"] = mu;
    diag["complementary_slackness_residual"] =
        result.diagnostics.complementary_slackness_residual;
  }
  doc["diagnostics"] = diag;
  return doc.dump(2) + "\n";
}

std::string trace_to_json(const NegotiationTrace& trace) {
  json events = json::array();
  for (const NegotiationEvent& e : trace.events) {
    json entry;
    entry["kind"] = event_kind_name(e.kind);
    entry["round"] = e.round;
    switch (e.kind) {
      case NegotiationEvent::Kind::Excluded:
      case NegotiationEvent::Kind::Readmitted:
        entry["ci"] = e.ci;
        break;
      case NegotiationEvent::Kind::Choice:
        entry["ci"] = e.ci;
        entry["own_entry"] = e.own_entry;
        entry["chosen_entry"] = e.chosen_entry;
        break;
      case NegotiationEvent::Kind::SolveAttempt:
        entry["feasible"] = e.feasible;
        entry["active"] = e.cis;
        break;
      case NegotiationEvent::Kind::Offered:
        entry["menu"] = menu_to_json(e.menu);
        break;
      case NegotiationEvent::Kind::RequestsReceived:
      case NegotiationEvent::Kind::Signed:
        entry["cis"] = e.cis;
        break;
      default:
        break;
    }
    events.push_back(std::move(entry));
  }

  json doc;
  doc["events"] = events;
  doc["final_menu"] = menu_to_json(trace.final_menu);
  doc["signatures"] = trace.signatures;
  json exclusions = json::array();
  for (const auto& [ci, round] : trace.exclusions) exclusions.push_back({ci, round});
  doc["exclusions"] = exclusions;
  doc["solve_rounds"] = trace.solve_rounds;
  return doc.dump(2) + "\n";
}

}  // namespace cip
