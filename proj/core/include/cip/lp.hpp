#pragma once

#include <vector>

namespace cip {

enum class LpRowSense { Le, Ge, Eq };

struct LpRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
  LpRowSense sense = LpRowSense::Le;
};

/// maximize objective . x  subject to rows, x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Marginal objective change per unit increase of each row's rhs.
  std::vector<double> row_duals;
  /// False when a nonbasic column has zero reduced cost at the optimum, i.e.
  /// another optimal vertex may exist.
  bool unique_vertex = true;
};

/// Dense two-phase tableau simplex with Bland's rule. Intended for small
/// problems (tens of variables); everything is O(rows * cols) per pivot.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace cip
