#include "cip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cip/lp.hpp"

namespace cip {

namespace {

constexpr const char* kReasonBudget = "minimum resources exceed the budget";
constexpr const char* kReasonIr1 = "IR(1) unsatisfiable; adjust design parameters";
constexpr const char* kReasonConstraints = "relaxed constraints admit no allocation";

double assigned_rate(const TypeLadder& ladder, TypePair t) {
  return ladder.reward_rates[static_cast<std::size_t>(t.w_index)];
}
double assigned_min(const TypeLadder& ladder, TypePair t) {
  return ladder.t_min[static_cast<std::size_t>(t.w_index)];
}
double own_margin(const TypeLadder& ladder, TypePair t, double beta, double v) {
  return composite_type(ladder, t) * v - beta * assigned_rate(ladder, t);
}

ContractMenu menu_from_allocation(const Scenario& sorted, const std::vector<int>& order,
                                  const std::vector<TypePair>& assigned,
                                  const std::vector<double>& t) {
  ContractMenu menu;
  menu.entries.reserve(t.size());
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    const TypePair type = assigned[pos];
    menu.entries.push_back(
        {order[pos], type, t[pos], assigned_rate(sorted.ladder, type) * t[pos]});
  }
  return menu;
}

// Square solve via Gaussian elimination with partial pivoting; nullopt when
// the system is numerically singular.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a,
                                                std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
        piv = r;
    if (std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]) < 1e-11)
      return std::nullopt;
    std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(col)]);
    std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c)
      acc -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
             x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
  }
  return x;
}

double row_value(const Constraint& c, const std::vector<double>& t) {
  double lhs = 0.0;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) lhs += c.coeffs[j] * t[j];
  return lhs;
}

bool satisfies_all(const ConstraintSet& set, const std::vector<double>& t, double tol) {
  for (const Constraint& c : set.constraints) {
    const double lhs = row_value(c, t);
    if (c.sense == Sense::Ge) {
      if (lhs < c.bound - tol) return false;
    } else if (std::abs(lhs - c.bound) > tol) {
      return false;
    }
  }
  return true;
}

// Re-solves the vertex from the constraints active at x. Pivoted tableau
// arithmetic drifts ~1e-8 at this problem's scale; a direct solve of the
// active rows from the original data restores ~1e-12 residuals, which the
// 1e-9 feasibility tolerance downstream needs.
std::vector<double> polish_vertex(const ConstraintSet& set, const std::vector<double>& x,
                                  const std::vector<double>& objective) {
  const int n = set.num_ci;
  std::vector<const Constraint*> active;
  for (const Constraint& c : set.constraints) {
    const double lhs = row_value(c, x);
    const double tol = 1e-6 * (1.0 + std::abs(c.bound) + std::abs(lhs));
    if (c.sense == Sense::Eq || std::abs(lhs - c.bound) <= tol) active.push_back(&c);
  }
  // Prefer simple rows (budget, minimums) for conditioning.
  std::stable_sort(active.begin(), active.end(), [](const Constraint* a, const Constraint* b) {
    auto klass = [](const Constraint* c) {
      if (c->sense == Sense::Eq) return 0;
      if (c->label.rfind("MIN", 0) == 0) return 1;
      return 2;
    };
    return klass(a) < klass(b);
  });

  // Greedy independent subset of n rows.
  std::vector<std::vector<double>> basis_rows;
  std::vector<std::vector<double>> elim;  // row-reduced copies
  std::vector<double> rhs;
  for (const Constraint* c : active) {
    if (static_cast<int>(basis_rows.size()) == n) break;
    std::vector<double> reduced = c->coeffs;
    for (const auto& e : elim) {
      int lead = -1;
      for (std::size_t j = 0; j < e.size(); ++j)
        if (std::abs(e[j]) > 1e-12) {
          lead = static_cast<int>(j);
          break;
        }
      if (lead < 0) continue;
      const double f = reduced[static_cast<std::size_t>(lead)] / e[static_cast<std::size_t>(lead)];
      for (std::size_t j = 0; j < reduced.size(); ++j) reduced[j] -= f * e[j];
    }
    double norm = 0.0;
    for (double r : reduced) norm = std::max(norm, std::abs(r));
    if (norm < 1e-8) continue;  // dependent on rows already chosen
    basis_rows.push_back(c->coeffs);
    elim.push_back(std::move(reduced));
    rhs.push_back(c->bound);
  }
  if (static_cast<int>(basis_rows.size()) != n) return x;

  const auto solved = solve_square(basis_rows, rhs);
  if (!solved) return x;
  if (!satisfies_all(set, *solved, kFeasibilityTol)) return x;

  double z_old = 0.0;
  double z_new = 0.0;
  for (int j = 0; j < n; ++j) {
    z_old += objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    z_new += objective[static_cast<std::size_t>(j)] * (*solved)[static_cast<std::size_t>(j)];
  }
  if (std::abs(z_new - z_old) > 1e-6 * (1.0 + std::abs(z_old))) return x;
  return *solved;
}

LpProblem to_lp(const ConstraintSet& set, const std::vector<double>& objective) {
  LpProblem lp;
  lp.num_vars = set.num_ci;
  lp.objective = objective;
  for (const Constraint& c : set.constraints) {
    LpRow row;
    row.coeffs = c.coeffs;
    row.rhs = c.bound;
    row.sense = c.sense == Sense::Ge ? LpRowSense::Ge : LpRowSense::Eq;
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

// Among optimal allocations, pins the lexicographically smallest one by
// minimizing each coordinate in turn on the optimal face.
std::vector<double> lexicographic_min(const ConstraintSet& set,
                                      const std::vector<double>& objective, double z_opt,
                                      const std::vector<double>& fallback) {
  const int n = set.num_ci;
  LpProblem base = to_lp(set, objective);
  {
    LpRow pin;
    pin.coeffs = objective;
    pin.rhs = z_opt;
    pin.sense = LpRowSense::Eq;
    base.rows.push_back(std::move(pin));
  }
  std::vector<double> fixed(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    LpProblem sub = base;
    sub.objective.assign(static_cast<std::size_t>(n), 0.0);
    sub.objective[static_cast<std::size_t>(i)] = -1.0;
    for (int j = 0; j < i; ++j) {
      LpRow pin;
      pin.coeffs.assign(static_cast<std::size_t>(n), 0.0);
      pin.coeffs[static_cast<std::size_t>(j)] = 1.0;
      pin.rhs = fixed[static_cast<std::size_t>(j)];
      pin.sense = LpRowSense::Eq;
      sub.rows.push_back(std::move(pin));
    }
    const LpSolution s = solve_lp(sub);
    if (s.status != LpStatus::Optimal) return fallback;  // numeric corner: keep main solve
    fixed[static_cast<std::size_t>(i)] = s.x[static_cast<std::size_t>(i)];
  }
  const auto polished = polish_vertex(set, fixed, objective);
  return satisfies_all(set, polished, kFeasibilityTol) ? polished : fallback;
}

KktDiagnostics extract_diagnostics(const ConstraintSet& set, const LpSolution& lp,
                                   const std::vector<double>& objective,
                                   const std::vector<double>& t) {
  KktDiagnostics diag;
  const int n = set.num_ci;
  std::vector<double> stationarity(objective);
  double cs_residual = 0.0;
  for (std::size_t r = 0; r < set.constraints.size(); ++r) {
    const Constraint& c = set.constraints[r];
    const double dual = lp.row_duals[r];
    if (c.sense == Sense::Eq) {
      diag.lambda = dual;
      for (int j = 0; j < n; ++j)
        stationarity[static_cast<std::size_t>(j)] -= dual * c.coeffs[static_cast<std::size_t>(j)];
    } else {
      const double mu = -dual;  // Ge rows tighten as rhs grows, so duals are <= 0
      diag.mu_labels.push_back(c.label);
      diag.mu.push_back(mu);
      for (int j = 0; j < n; ++j)
        stationarity[static_cast<std::size_t>(j)] += mu * c.coeffs[static_cast<std::size_t>(j)];
      cs_residual = std::max(cs_residual, std::abs(mu * (row_value(c, t) - c.bound)));
    }
  }
  double stat_residual = 0.0;
  for (int j = 0; j < n; ++j)
    stat_residual = std::max(stat_residual, std::abs(stationarity[static_cast<std::size_t>(j)]));

  double scale = 1.0;
  for (double c : objective) scale = std::max(scale, std::abs(c));
  diag.complementary_slackness_residual = cs_residual;

  bool mu_ok = true;
  for (double mu : diag.mu)
    if (mu < -kFeasibilityTol) mu_ok = false;
  diag.available = mu_ok && stat_residual <= 1e-6 * scale &&
                   cs_residual <= 1e-6 * scale * (1.0 + std::abs(lp.objective));
  return diag;
}

struct SortedView {
  Scenario scenario;           // rows permuted ascending by assigned composite
  std::vector<int> order;      // sorted position -> original CI
  std::vector<TypePair> assigned;  // ascending
};

SortedView make_sorted_view(const Scenario& scenario) {
  SortedView view;
  auto sorted = sorted_by_assigned_type(scenario);
  view.scenario = std::move(sorted.scenario);
  view.order = std::move(sorted.order);
  view.assigned = assign_types(view.scenario.beliefs);
  return view;
}

SolveResult infeasible(std::string reason) {
  SolveResult result;
  result.status = SolveStatus::Infeasible;
  result.reason = std::move(reason);
  return result;
}

// Entry-point guard: a malformed scenario (ragged belief rows, invalid
// ladder) must fail loudly instead of indexing out of range.
void require_solvable(const Scenario& scenario, const char* who) {
  const ValidationReport ladder_report = validate_ladder(scenario.ladder);
  if (!ladder_report.ok)
    throw std::invalid_argument(std::string(who) + ": invalid ladder: " +
                                ladder_report.violations.front());
  const std::size_t n = scenario.beliefs.p.size();
  if (n == 0 || scenario.beliefs.q.size() != n)
    throw std::invalid_argument(std::string(who) + ": belief rows missing or mismatched");
  for (std::size_t i = 0; i < n; ++i) {
    if (scenario.beliefs.p[i].size() != scenario.ladder.w_levels.size() ||
        scenario.beliefs.q[i].size() != scenario.ladder.theta_levels.size())
      throw std::invalid_argument(std::string(who) + ": belief row width mismatch");
  }
  if (!(scenario.t_max >= 0.0) || !std::isfinite(scenario.t_max))
    throw std::invalid_argument(std::string(who) + ": budget must be finite and nonnegative");
}

}  // namespace

std::vector<double> objective_coefficients(const Scenario& scenario) {
  const TypeLadder& ladder = scenario.ladder;
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(scenario.num_ci()));
  for (int i = 0; i < scenario.num_ci(); ++i) {
    const auto& p_row = scenario.beliefs.p[static_cast<std::size_t>(i)];
    const auto& q_row = scenario.beliefs.q[static_cast<std::size_t>(i)];
    double expected_theta = 0.0;
    for (std::size_t k = 0; k < q_row.size(); ++k)
      expected_theta += q_row[k] * ladder.theta_levels[k];
    double expected_margin = 0.0;
    for (std::size_t j = 0; j < p_row.size(); ++j)
      expected_margin += p_row[j] * ladder.w_levels[j] * (ladder.reward_rates[j] - 1.0);
    c.push_back(expected_theta * expected_margin);
  }
  return c;
}

SolveResult solve_two_ci(const Scenario& scenario) {
  if (scenario.num_ci() != 2)
    throw std::invalid_argument("solve_two_ci: exactly two infrastructures required");
  require_solvable(scenario, "solve_two_ci");

  const SortedView view = make_sorted_view(scenario);
  const TypeLadder& ladder = view.scenario.ladder;
  const double t1_min = assigned_min(ladder, view.assigned[0]);
  const double t2_min = assigned_min(ladder, view.assigned[1]);

  if (t1_min + t2_min > view.scenario.t_max) return infeasible(kReasonBudget);
  const double margin1 = own_margin(ladder, view.assigned[0], scenario.beta, scenario.v);
  if (margin1 < 0.0 && t1_min > 0.0) return infeasible(kReasonIr1);

  const std::vector<double> t = {t1_min, view.scenario.t_max - t1_min};
  SolveResult result;
  result.status = SolveStatus::Optimal;
  result.menu = menu_from_allocation(view.scenario, view.order, view.assigned, t);
  result.objective = cc_expected_utility(result.menu, scenario.beliefs, ladder);

  // Stationarity gives lambda = c_2 and puts the whole gap on MIN(1); all
  // other multipliers vanish because their constraints are slack here.
  const auto c = objective_coefficients(view.scenario);
  KktDiagnostics diag;
  diag.lambda = c[1];
  diag.mu_labels = {"IR(1)", "DLIC(2)", "MIN(1)", "MIN(2)"};
  diag.mu = {0.0, 0.0, c[1] - c[0], 0.0};
  diag.complementary_slackness_residual = 0.0;  // MIN(1) holds with equality exactly
  diag.available = c[1] >= c[0];
  result.diagnostics = diag;
  return result;
}

SolveResult solve_optimal(const Scenario& scenario) {
  const int n = scenario.num_ci();
  if (n < 1) throw std::invalid_argument("solve_optimal: at least one infrastructure required");
  require_solvable(scenario, "solve_optimal");

  const SortedView view = make_sorted_view(scenario);
  const TypeLadder& ladder = view.scenario.ladder;

  double min_total = 0.0;
  for (const TypePair& t : view.assigned) min_total += assigned_min(ladder, t);
  if (min_total > view.scenario.t_max) return infeasible(kReasonBudget);

  const double margin1 = own_margin(ladder, view.assigned[0], scenario.beta, scenario.v);
  if (margin1 < 0.0 && assigned_min(ladder, view.assigned[0]) > 0.0)
    return infeasible(kReasonIr1);

  const ConstraintSet relaxed = build_relaxed_constraints(view.scenario, view.assigned);
  const std::vector<double> c = objective_coefficients(view.scenario);

  const LpSolution lp = solve_lp(to_lp(relaxed, c));
  if (lp.status == LpStatus::Unbounded)
    throw std::runtime_error("solve_optimal: unbounded despite budget equality");
  if (lp.status != LpStatus::Optimal) return infeasible(kReasonConstraints);

  std::vector<double> t = polish_vertex(relaxed, lp.x, c);
  if (!lp.unique_vertex) {
    double z = 0.0;
    for (int j = 0; j < n; ++j)
      z += c[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(j)];
    t = lexicographic_min(relaxed, c, z, t);
  }

  SolveResult result;
  result.status = SolveStatus::Optimal;
  result.menu = menu_from_allocation(view.scenario, view.order, view.assigned, t);
  result.objective = cc_expected_utility(result.menu, scenario.beliefs, ladder);
  result.diagnostics = extract_diagnostics(relaxed, lp, c, t);
  return result;
}

SolveResult brute_force_oracle(const Scenario& scenario, double grid_step) {
  if (!(grid_step > 0.0))
    throw std::invalid_argument("brute_force_oracle: grid step must be positive");
  const int n = scenario.num_ci();
  if (n < 1) throw std::invalid_argument("brute_force_oracle: at least one infrastructure required");
  require_solvable(scenario, "brute_force_oracle");

  const SortedView view = make_sorted_view(scenario);
  const TypeLadder& ladder = view.scenario.ladder;
  const double t_max = view.scenario.t_max;

  std::vector<double> mins;
  double min_total = 0.0;
  for (const TypePair& t : view.assigned) {
    mins.push_back(assigned_min(ladder, t));
    min_total += mins.back();
  }
  if (min_total > t_max) return infeasible(kReasonBudget);

  const double slack = t_max - min_total;
  const auto steps = static_cast<long long>(std::floor(slack / grid_step));
  double grid_points = 1.0;
  for (int d = 1; d < n; ++d) grid_points *= static_cast<double>(steps + d) / d;
  if (grid_points > 1e8)
    throw std::invalid_argument("brute_force_oracle: grid exceeds 1e8 points");

  const ConstraintSet relaxed = build_relaxed_constraints(view.scenario, view.assigned);
  const std::vector<double> c = objective_coefficients(view.scenario);

  std::vector<double> t(static_cast<std::size_t>(n), 0.0);
  std::vector<double> best;
  double best_value = -std::numeric_limits<double>::infinity();

  auto feasible_point = [&](const std::vector<double>& point) {
    for (const Constraint& row : relaxed.constraints) {
      const double lhs = row_value(row, point);
      if (row.sense == Sense::Ge) {
        if (lhs < row.bound - kFeasibilityTol) return false;
      } else if (std::abs(lhs - row.bound) > 1e-6) {
        return false;
      }
    }
    return true;
  };

  // Depth-first over the first n-1 coordinates; the last takes the remainder.
  auto recurse = [&](auto&& self, int depth, double used) -> void {
    if (depth == n - 1) {
      const double rest = t_max - used;
      if (rest < mins[static_cast<std::size_t>(depth)] - kFeasibilityTol) return;
      t[static_cast<std::size_t>(depth)] = rest;
      if (!feasible_point(t)) return;
      double value = 0.0;
      for (int j = 0; j < n; ++j)
        value += c[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(j)];
      if (value > best_value) {
        best_value = value;
        best = t;
      }
      return;
    }
    double remaining_mins = 0.0;
    for (int j = depth + 1; j < n; ++j) remaining_mins += mins[static_cast<std::size_t>(j)];
    for (long long k = 0;; ++k) {
      const double ti = mins[static_cast<std::size_t>(depth)] + static_cast<double>(k) * grid_step;
      if (used + ti + remaining_mins > t_max + kFeasibilityTol) break;
      t[static_cast<std::size_t>(depth)] = ti;
      self(self, depth + 1, used + ti);
    }
  };
  recurse(recurse, 0, 0.0);

  if (best.empty()) return infeasible(kReasonConstraints);

  SolveResult result;
  result.status = SolveStatus::Optimal;
  result.menu = menu_from_allocation(view.scenario, view.order, view.assigned, best);
  result.objective = cc_expected_utility(result.menu, scenario.beliefs, ladder);
  return result;
}

ContractMenu equal_allocation(const Scenario& scenario) {
  const int n = scenario.num_ci();
  if (n < 1) throw std::invalid_argument("equal_allocation: at least one infrastructure required");
  require_solvable(scenario, "equal_allocation");
  const SortedView view = make_sorted_view(scenario);
  const std::vector<double> t(static_cast<std::size_t>(n), scenario.t_max / n);
  return menu_from_allocation(view.scenario, view.order, view.assigned, t);
}

}  // namespace cip
