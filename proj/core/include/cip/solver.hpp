#pragma once

#include <string>
#include <vector>

#include "cip/domain.hpp"
#include "cip/feasibility.hpp"

namespace cip {

enum class SolveStatus { Optimal, Infeasible };

/// Multipliers for the relaxed system at the reported solution. available is
/// false when the method could not certify them (degenerate vertices,
/// out-of-regime closed forms).
struct KktDiagnostics {
  bool available = false;
  double lambda = 0.0;  // budget multiplier
  std::vector<std::string> mu_labels;
  std::vector<double> mu;  // one per inequality constraint, same order as labels
  double complementary_slackness_residual = 0.0;
};

struct SolveResult {
  ContractMenu menu;
  double objective = 0.0;  // expected control-center utility of the menu
  SolveStatus status = SolveStatus::Infeasible;
  std::string reason;  // set when infeasible
  KktDiagnostics diagnostics;
};

/// Per-CI objective coefficients c_i = (sum_k q_ik theta_k)(sum_j p_ij w_j (r_j - 1)),
/// in the scenario's CI order.
std::vector<double> objective_coefficients(const Scenario& scenario);

/// Closed-form two-infrastructure solution: the lower composite type gets its
/// minimum, the rest of the budget goes to the higher type. Infeasible when
/// the minimums exceed the budget or IR(1) cannot hold. Throws unless N == 2.
SolveResult solve_two_ci(const Scenario& scenario);

/// Maximizes the expected control-center utility over the relaxed constraint
/// system via a dense LP. Ties between optimal allocations resolve to the
/// lexicographically smallest one (lowest-index sorted CI minimized first).
SolveResult solve_optimal(const Scenario& scenario);

/// Exhaustive delta-grid search over allocations with exact budget: the first
/// N-1 sorted CIs range over t_min + k*delta, the last takes the remainder.
/// Independent check for solve_optimal; O(grid^(N-1)). Throws when the grid
/// exceeds 1e8 points or delta <= 0.
SolveResult brute_force_oracle(const Scenario& scenario, double grid_step);

/// t_max/N to every infrastructure at its assigned rate. Baseline only; makes
/// no feasibility claims.
ContractMenu equal_allocation(const Scenario& scenario);

}  // namespace cip
