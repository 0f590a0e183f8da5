// Command-line front end: scenario generation, validation, contract solving,
// negotiation simulation, and the fig1-fig3 study tables.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cip/experiments.hpp"
#include "cip/json_io.hpp"
#include "cip/negotiation.hpp"
#include "cip/solver.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << content;
}

cip::BudgetMode parse_budget(const std::string& name) {
  if (name == "fixed") return cip::BudgetMode::Fixed;
  if (name == "grow") return cip::BudgetMode::Grow;
  if (name == "both") return cip::BudgetMode::Both;
  throw CLI::ValidationError("--budget must be fixed, grow, or both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contract-based resource allocation for critical infrastructures"};
  app.require_subcommand(1);

  // gen-scenario
  int gen_n = 3;
  std::uint64_t gen_seed = 42;
  bool gen_fig2 = false;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-scenario", "Generate a study scenario as JSON");
  gen->add_option("--n", gen_n, "Number of infrastructures")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Belief/type sampling seed");
  gen->add_flag("--fig2", gen_fig2, "Four-level ascending-type instance (ignores --n/--seed)");
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file's invariants");
  validate->add_option("file", validate_path, "Scenario JSON")->required();

  // solve
  std::string solve_path;
  std::string solve_out;
  bool solve_oracle = false;
  double solve_step = 1.0;
  auto* solve = app.add_subcommand("solve", "Compute the optimal contract menu");
  solve->add_option("file", solve_path, "Scenario JSON")->required();
  solve->add_flag("--oracle", solve_oracle, "Use the exhaustive grid search instead of the LP");
  solve->add_option("--step", solve_step, "Grid step for --oracle")->check(CLI::PositiveNumber);
  solve->add_option("--out", solve_out, "Output path (default: stdout)");

  // negotiate
  std::string nego_path;
  std::string nego_out;
  int nego_rounds = -1;
  auto* nego = app.add_subcommand("negotiate", "Run the offer/feedback protocol");
  nego->add_option("file", nego_path, "Scenario JSON")->required();
  nego->add_option("--max-rounds", nego_rounds, "Solve-round cap (default 2N)");
  nego->add_option("--out", nego_out, "Output path (default: stdout)");

  // fig1 / fig2 / fig3
  cip::ExperimentConfig config;
  std::string budget_name = "both";
  std::string fig_out;
  auto* fig1 = app.add_subcommand("fig1", "Contract vs equal-allocation utility ratios by N");
  fig1->add_option("--n-max", config.n_max, "Largest CI count")->check(CLI::PositiveNumber);
  fig1->add_option("--budget", budget_name, "fixed, grow, or both");
  fig1->add_option("--seed", config.seed, "Belief sampling seed");
  fig1->add_option("--out", fig_out, "CSV path (default: stdout)");
  auto* fig2 = app.add_subcommand("fig2", "Per-CI utilities under contract and equal split");
  fig2->add_option("--seed", config.seed, "Provenance seed");
  fig2->add_option("--out", fig_out, "CSV path (default: stdout)");
  auto* fig3 = app.add_subcommand("fig3", "Cross-type utility matrix");
  fig3->add_option("--seed", config.seed, "Provenance seed");
  fig3->add_option("--out", fig_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const cip::Scenario scenario =
          gen_fig2 ? cip::fig_scenario() : cip::default_scenario(gen_n, gen_seed);
      write_output(gen_out, cip::scenario_to_json(scenario));
    } else if (validate->parsed()) {
      const cip::Scenario scenario = cip::scenario_from_json(read_file(validate_path));
      const cip::ValidationReport report = cip::validate_scenario(scenario);
      if (!report.ok) {
        std::cout << cip::scenario_report_to_json(report, nullptr);
        return 1;
      }
      const cip::FeasibilityReport feasibility = cip::check_scenario_feasibility(scenario);
      std::cout << cip::scenario_report_to_json(report, &feasibility);
      return feasibility.satisfied ? 0 : 1;
    } else if (solve->parsed()) {
      const cip::Scenario scenario = cip::scenario_from_json(read_file(solve_path));
      const cip::SolveResult result = solve_oracle
                                          ? cip::brute_force_oracle(scenario, solve_step)
                                          : cip::solve_optimal(scenario);
      write_output(solve_out, cip::solve_result_to_json(result));
    } else if (nego->parsed()) {
      const cip::Scenario scenario = cip::scenario_from_json(read_file(nego_path));
      const cip::NegotiationTrace trace = cip::run_negotiation(scenario, nego_rounds);
      write_output(nego_out, cip::trace_to_json(trace));
    } else {
      config.budget = parse_budget(budget_name);
      cip::ResultTable table;
      if (fig1->parsed()) table = cip::experiment_fig1(config);
      if (fig2->parsed()) table = cip::experiment_fig2(config);
      if (fig3->parsed()) table = cip::experiment_fig3(config);
      write_output(fig_out, cip::to_csv(table));
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
