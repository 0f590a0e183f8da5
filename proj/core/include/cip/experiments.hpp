#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cip/domain.hpp"

namespace cip {

enum class BudgetMode { Fixed, Grow, Both };

struct ExperimentConfig {
  int n_min = 3;
  int n_max = 8;
  BudgetMode budget = BudgetMode::Both;
  std::uint64_t seed = 42;
};

/// Columnar experiment output; notes carry provenance (seed, scenario hash)
/// and summary lines and render as leading '#' comments in the CSV.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

std::string to_csv(const ResultTable& table);

/// Standard study instance: 3 vulnerability levels (1, 3, 9) with rates
/// (3, 6, 9), minimums (20, 60, 100), 4 criticality levels, budget 500,
/// beta 0.5, v 2. Belief rows are seeded per CI (instances nest as n grows);
/// each row peaks at a vulnerability level cycling with the CI index, and
/// true types are sampled from the rows.
Scenario default_scenario(int n, std::uint64_t seed);

/// Four-level variant: adds w=27 with rate 12 and minimum 140, budget 650.
/// Four CIs sit in ascending types (CI i has level-i vulnerability and
/// criticality); beliefs put 0.7 on the true level and spread the rest.
Scenario fig_scenario();

/// Contract-vs-equal utility ratio per N, under a fixed budget and/or a
/// budget growing by 30% of the base per added CI.
ResultTable experiment_fig1(const ExperimentConfig& config);

/// Per-CI realized utilities (true types) under the optimal menu and under
/// equal allocation, on the four-level instance.
ResultTable experiment_fig2(const ExperimentConfig& config);

/// N x N cross-utility matrix: CI i's true-type utility at every menu entry.
ResultTable experiment_fig3(const ExperimentConfig& config);

/// Building blocks for the fig2/fig3 tables on an arbitrary scenario with
/// true types. Exposed for tests and degenerate studies.
ResultTable fig2_table(const Scenario& scenario);
ResultTable fig3_table(const Scenario& scenario);

}  // namespace cip
