#include "cip/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cip {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kUniqueTol = 1e-7;

struct Tableau {
  int m = 0;           // constraint rows
  int total_cols = 0;  // structural + slack/surplus + artificial
  int num_struct = 0;
  int art_begin = 0;  // first artificial column
  std::vector<std::vector<double>> a;  // m rows, total_cols + 1 (rhs last)
  std::vector<int> basis;              // basic column per row
  std::vector<int> row_identity_col;   // slack or artificial column seeded as identity
  std::vector<bool> flipped;           // row negated during normalization
};

double& rhs(Tableau& t, int i) { return t.a[static_cast<std::size_t>(i)].back(); }

void pivot(Tableau& t, int prow, int pcol) {
  auto& rows = t.a;
  const double pv = rows[static_cast<std::size_t>(prow)][static_cast<std::size_t>(pcol)];
  for (double& x : rows[static_cast<std::size_t>(prow)]) x /= pv;
  for (int i = 0; i < t.m; ++i) {
    if (i == prow) continue;
    const double factor = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(pcol)];
    if (std::abs(factor) < 1e-300) continue;
    auto& target = rows[static_cast<std::size_t>(i)];
    const auto& source = rows[static_cast<std::size_t>(prow)];
    for (std::size_t j = 0; j < target.size(); ++j) target[j] -= factor * source[j];
  }
  t.basis[static_cast<std::size_t>(prow)] = pcol;
}

// Runs the simplex loop for the given column costs. allowed[j] == false blocks
// a column from entering. Returns false when unbounded.
bool run_simplex(Tableau& t, const std::vector<double>& cost,
                 const std::vector<bool>& allowed) {
  const int iter_cap = 2000 * (t.m + t.total_cols + 10);
  for (int iter = 0; iter < iter_cap; ++iter) {
    // Reduced costs from scratch each pass keeps drift out of the pricing.
    int entering = -1;
    for (int j = 0; j < t.total_cols; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      bool basic = false;
      for (int i = 0; i < t.m; ++i) {
        if (t.basis[static_cast<std::size_t>(i)] == j) {
          basic = true;
          break;
        }
      }
      if (basic) continue;
      double zj = 0.0;
      for (int i = 0; i < t.m; ++i)
        zj += cost[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(i)])] *
              t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const double rc = cost[static_cast<std::size_t>(j)] - zj;
      if (rc > kReducedCostTol) {
        entering = j;  // Bland: first improving column
        break;
      }
    }
    if (entering < 0) return true;  // optimal

    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.m; ++i) {
      const double aij = t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(entering)];
      if (aij > kPivotTol) {
        const double ratio = rhs(t, i) / aij;
        if (leaving < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             t.basis[static_cast<std::size_t>(i)] <
                 t.basis[static_cast<std::size_t>(leaving)])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
    }
    if (leaving < 0) return false;  // unbounded direction
    pivot(t, leaving, entering);
  }
  throw std::runtime_error("solve_lp: iteration limit exceeded");
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const int n = problem.num_vars;
  const int m = static_cast<int>(problem.rows.size());
  if (static_cast<int>(problem.objective.size()) != n)
    throw std::invalid_argument("solve_lp: objective size mismatch");
  for (const LpRow& row : problem.rows)
    if (static_cast<int>(row.coeffs.size()) != n)
      throw std::invalid_argument("solve_lp: row size mismatch");

  // Normalize to nonnegative rhs; count slack/surplus and artificial columns.
  std::vector<LpRow> rows = problem.rows;
  std::vector<bool> flipped(static_cast<std::size_t>(m), false);
  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    if (row.rhs < 0.0) {
      for (double& c : row.coeffs) c = -c;
      row.rhs = -row.rhs;
      if (row.sense == LpRowSense::Le)
        row.sense = LpRowSense::Ge;
      else if (row.sense == LpRowSense::Ge)
        row.sense = LpRowSense::Le;
      flipped[static_cast<std::size_t>(i)] = true;
    }
    scale = std::max(scale, row.rhs);
  }

  int num_slack = 0;
  int num_art = 0;
  for (const LpRow& row : rows) {
    if (row.sense != LpRowSense::Eq) ++num_slack;
    if (row.sense != LpRowSense::Le) ++num_art;
  }

  Tableau t;
  t.m = m;
  t.num_struct = n;
  t.art_begin = n + num_slack;
  t.total_cols = n + num_slack + num_art;
  t.flipped = flipped;
  t.a.assign(static_cast<std::size_t>(m),
             std::vector<double>(static_cast<std::size_t>(t.total_cols) + 1, 0.0));
  t.basis.assign(static_cast<std::size_t>(m), -1);
  t.row_identity_col.assign(static_cast<std::size_t>(m), -1);

  int slack_col = n;
  int art_col = t.art_begin;
  for (int i = 0; i < m; ++i) {
    const LpRow& row = rows[static_cast<std::size_t>(i)];
    auto& tr = t.a[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) tr[static_cast<std::size_t>(j)] = row.coeffs[static_cast<std::size_t>(j)];
    tr.back() = row.rhs;
    switch (row.sense) {
      case LpRowSense::Le:
        tr[static_cast<std::size_t>(slack_col)] = 1.0;
        t.basis[static_cast<std::size_t>(i)] = slack_col;
        t.row_identity_col[static_cast<std::size_t>(i)] = slack_col;
        ++slack_col;
        break;
      case LpRowSense::Ge:
        tr[static_cast<std::size_t>(slack_col)] = -1.0;
        ++slack_col;
        tr[static_cast<std::size_t>(art_col)] = 1.0;
        t.basis[static_cast<std::size_t>(i)] = art_col;
        t.row_identity_col[static_cast<std::size_t>(i)] = art_col;
        ++art_col;
        break;
      case LpRowSense::Eq:
        tr[static_cast<std::size_t>(art_col)] = 1.0;
        t.basis[static_cast<std::size_t>(i)] = art_col;
        t.row_identity_col[static_cast<std::size_t>(i)] = art_col;
        ++art_col;
        break;
    }
  }

  LpSolution solution;

  // Phase 1: drive artificials to zero.
  if (num_art > 0) {
    std::vector<double> cost(static_cast<std::size_t>(t.total_cols), 0.0);
    for (int j = t.art_begin; j < t.total_cols; ++j) cost[static_cast<std::size_t>(j)] = -1.0;
    std::vector<bool> allowed(static_cast<std::size_t>(t.total_cols), true);
    if (!run_simplex(t, cost, allowed))
      throw std::runtime_error("solve_lp: phase 1 unbounded");

    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[static_cast<std::size_t>(i)] >= t.art_begin)
        infeasibility += rhs(t, i);
    if (infeasibility > 1e-7 * (1.0 + scale)) {
      solution.status = LpStatus::Infeasible;
      return solution;
    }

    // Pivot remaining zero-valued artificials out where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis[static_cast<std::size_t>(i)] < t.art_begin) continue;
      for (int j = 0; j < t.art_begin; ++j) {
        if (std::abs(t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > 1e-7) {
          pivot(t, i, j);
          break;
        }
      }
    }
  }

  // Phase 2: real objective; artificial columns may not re-enter.
  std::vector<double> cost(static_cast<std::size_t>(t.total_cols), 0.0);
  for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(j)] = problem.objective[static_cast<std::size_t>(j)];
  std::vector<bool> allowed(static_cast<std::size_t>(t.total_cols), true);
  for (int j = t.art_begin; j < t.total_cols; ++j) allowed[static_cast<std::size_t>(j)] = false;
  if (!run_simplex(t, cost, allowed)) {
    solution.status = LpStatus::Unbounded;
    return solution;
  }

  solution.status = LpStatus::Optimal;
  solution.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    const int b = t.basis[static_cast<std::size_t>(i)];
    if (b < n) solution.x[static_cast<std::size_t>(b)] = rhs(t, i);
  }
  solution.objective = 0.0;
  for (int j = 0; j < n; ++j)
    solution.objective += problem.objective[static_cast<std::size_t>(j)] * solution.x[static_cast<std::size_t>(j)];

  // Duals: z_j under each row's seeded identity column equals c_B B^-1 e_i.
  solution.row_duals.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const int col = t.row_identity_col[static_cast<std::size_t>(i)];
    double zj = 0.0;
    for (int r = 0; r < m; ++r)
      zj += cost[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(r)])] *
            t.a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
    solution.row_duals[static_cast<std::size_t>(i)] =
        t.flipped[static_cast<std::size_t>(i)] ? -zj : zj;
  }

  // Alternate-optimum probe: any allowed nonbasic column with ~zero reduced cost.
  for (int j = 0; j < t.art_begin && solution.unique_vertex; ++j) {
    bool basic = false;
    for (int i = 0; i < m; ++i)
      if (t.basis[static_cast<std::size_t>(i)] == j) {
        basic = true;
        break;
      }
    if (basic) continue;
    double zj = 0.0;
    for (int i = 0; i < m; ++i)
      zj += cost[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(i)])] *
            t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (std::abs(cost[static_cast<std::size_t>(j)] - zj) <= kUniqueTol)
      solution.unique_vertex = false;
  }

  return solution;
}

}  // namespace cip
