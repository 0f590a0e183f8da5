#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include <json.hpp>

#include "cip/experiments.hpp"
#include "cip/json_io.hpp"
#include "cip/negotiation.hpp"
#include "cip/random.hpp"
#include "cip/solver.hpp"
#include "support/generators.hpp"

using namespace cip;

TEST_CASE("scenario serialization round-trips byte for byte") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(trial));
    const Scenario scenario = testgen::small_grid_scenario(sub, sub.uniform_int(1, 4));
    const std::string once = scenario_to_json(scenario);
    const Scenario parsed = scenario_from_json(once);
    CHECK(scenario_to_json(parsed) == once);
  }
}

TEST_CASE("scenario documents carry the interchange fields") {
  const std::string text = scenario_to_json(default_scenario(2, 42));
  const auto doc = nlohmann::json::parse(text);
  for (const char* key : {"w_levels", "theta_levels", "reward_rates", "t_min", "p", "q",
                          "true_types", "t_max", "beta", "v"})
    CHECK(doc.contains(key));
  CHECK(doc["p"].size() == 2);
  CHECK(doc["true_types"][0].size() == 2);
}

TEST_CASE("malformed scenario input raises invalid_argument") {
  CHECK_THROWS_AS(scenario_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(scenario_from_json("{\"w_levels\": [1.0]}"), std::invalid_argument);
  CHECK_THROWS_AS(
      scenario_from_json(
          R"({"w_levels":[1],"theta_levels":[1],"reward_rates":[3],"t_min":[20],
              "p":[[1]],"q":[[1]],"true_types":[[0]],"t_max":100,"beta":0.5,"v":2})"),
      std::invalid_argument);
}

TEST_CASE("solve results serialize their menu and diagnostics") {
  Rng rng(9);
  const SolveResult result = solve_two_ci(testgen::regime_two_ci(rng));
  const auto doc = nlohmann::json::parse(solve_result_to_json(result));
  CHECK(doc["status"] == "optimal");
  CHECK(doc["menu"].size() == 2);
  CHECK(doc["menu"][0].contains("resources"));
  CHECK(doc["menu"][0].contains("reward"));
  CHECK(doc["diagnostics"]["available"].is_boolean());
}

TEST_CASE("infeasible results carry their reason") {
  Scenario scenario = fig_scenario();
  scenario.t_max = 10.0;
  const auto doc = nlohmann::json::parse(solve_result_to_json(solve_optimal(scenario)));
  CHECK(doc["status"] == "infeasible");
  CHECK(doc.contains("reason"));
}

TEST_CASE("negotiation traces serialize events and signatures") {
  const NegotiationTrace trace = run_negotiation(fig_scenario());
  const auto doc = nlohmann::json::parse(trace_to_json(trace));
  CHECK(doc["events"][0]["kind"] == "declared");
  CHECK(doc["signatures"].size() == 4);
  CHECK(doc["solve_rounds"] == 1);
  bool saw_choice = false;
  for (const auto& e : doc["events"])
    saw_choice = saw_choice || e["kind"] == "choice";
  CHECK(saw_choice);
}

TEST_CASE("validation reports serialize violations") {
  TypeLadder ladder{{2.0, 1.0}, {1.0}, {3.0, 6.0}, {20.0, 60.0}};
  const auto doc = nlohmann::json::parse(validation_report_to_json(validate_ladder(ladder)));
  CHECK(doc["ok"] == false);
  CHECK(doc["violations"].size() >= 1);
}

TEST_CASE("feasibility reports serialize labeled slack") {
  FeasibilityReport report;
  report.satisfied = false;
  report.violations = {{"IC(1,2)", 1.0, 2.0, -1.0}};
  const auto doc = nlohmann::json::parse(feasibility_report_to_json(report));
  CHECK(doc["satisfied"] == false);
  CHECK(doc["violations"][0]["label"] == "IC(1,2)");
  CHECK(doc["violations"][0]["slack"] == -1.0);
}
