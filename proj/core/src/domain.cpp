#include "cip/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cip {

namespace {

// Relative slack for the separation inequality: make_theta_ladder can land
// exactly on the bound and the comparison must not flip on rounding.
constexpr double kSeparationRelTol = 1e-12;

bool strictly_increasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate_ladder(const TypeLadder& ladder) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (ladder.w_levels.empty()) fail("W_EMPTY: at least one vulnerability level required");
  if (ladder.theta_levels.empty()) fail("THETA_EMPTY: at least one criticality level required");
  for (double w : ladder.w_levels) {
    if (!(w > 0.0)) {
      fail("W_POSITIVE: vulnerability levels must be positive");
      break;
    }
  }
  for (double th : ladder.theta_levels) {
    if (!(th > 0.0)) {
      fail("THETA_POSITIVE: criticality levels must be positive");
      break;
    }
  }
  if (!strictly_increasing(ladder.w_levels))
    fail("W_ORDER: vulnerability levels must be strictly increasing");
  if (!strictly_increasing(ladder.theta_levels))
    fail("THETA_ORDER: criticality levels must be strictly increasing");

  if (!ladder.w_levels.empty() && !ladder.theta_levels.empty()) {
    const double theta_lo = ladder.theta_levels.front();
    const double theta_hi = ladder.theta_levels.back();
    for (std::size_t i = 0; i + 1 < ladder.w_levels.size(); ++i) {
      const double lhs = theta_hi * ladder.w_levels[i];
      const double rhs = theta_lo * ladder.w_levels[i + 1];
      if (lhs > rhs * (1.0 + kSeparationRelTol)) {
        fail("SEPARATION: theta_K*w_" + std::to_string(i + 1) + " = " + std::to_string(lhs) +
             " exceeds theta_1*w_" + std::to_string(i + 2) + " = " + std::to_string(rhs));
      }
    }
  }

  if (ladder.reward_rates.size() != ladder.w_levels.size())
    fail("RATE_COUNT: one reward rate per vulnerability level required");
  else {
    for (double r : ladder.reward_rates) {
      if (!(r > 0.0)) {
        fail("RATE_POSITIVE: reward rates must be positive");
        break;
      }
    }
    if (!strictly_increasing(ladder.reward_rates))
      fail("RATE_ORDER: reward rates must be strictly increasing in vulnerability");
  }

  if (ladder.t_min.size() != ladder.w_levels.size())
    fail("TMIN_COUNT: one minimum-resource bound per vulnerability level required");
  else {
    for (double m : ladder.t_min) {
      if (m < 0.0) {
        fail("TMIN_NONNEGATIVE: minimum resources must be nonnegative");
        break;
      }
    }
    for (std::size_t i = 1; i < ladder.t_min.size(); ++i) {
      if (ladder.t_min[i] < ladder.t_min[i - 1]) {
        fail("TMIN_ORDER: minimum resources must be nondecreasing in vulnerability");
        break;
      }
    }
  }

  return report;
}

std::vector<double> make_theta_ladder(const std::vector<double>& w_levels, int k,
                                      double spread) {
  if (k < 1) throw std::invalid_argument("make_theta_ladder: k must be >= 1");
  if (!strictly_increasing(w_levels) || w_levels.empty() || !(w_levels.front() > 0.0))
    throw std::invalid_argument("make_theta_ladder: w levels must be positive and strictly increasing");
  if (!(spread > 0.0) || spread > 1.0)
    throw std::invalid_argument("make_theta_ladder: spread must be in (0, 1]");

  if (k == 1) return {1.0};

  double max_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < w_levels.size(); ++i)
    max_ratio = std::min(max_ratio, w_levels[i + 1] / w_levels[i]);
  if (!std::isfinite(max_ratio)) max_ratio = 16.0;  // single w level: any spread works

  double ratio = 1.0 + spread * (max_ratio - 1.0);
  // Division rounding can put ratio a hair above an adjacent w ratio; nudge down.
  for (std::size_t i = 0; i + 1 < w_levels.size(); ++i) {
    while (ratio * w_levels[i] > w_levels[i + 1] && ratio > 1.0)
      ratio = std::nextafter(ratio, 1.0);
  }

  std::vector<double> theta(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    theta[static_cast<std::size_t>(j)] =
        std::pow(ratio, static_cast<double>(j) / static_cast<double>(k - 1));
  theta.front() = 1.0;
  theta.back() = ratio;
  return theta;
}

double ci_utility(double theta, double w, double t, double reward_rate, double beta,
                  double v) {
  return theta * w * v * t - beta * (reward_rate * t);
}

double cc_utility_single(double theta, double w, double t, double reward_rate) {
  return theta * w * (reward_rate * t - t);
}

double cc_expected_utility(const ContractMenu& menu, const BeliefMatrix& beliefs,
                           const TypeLadder& ladder) {
  const int n = menu.size();
  if (n != beliefs.num_ci())
    throw std::invalid_argument("cc_expected_utility: menu/belief CI count mismatch");

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const ContractEntry& entry = menu.entries[static_cast<std::size_t>(i)];
    const int ci = entry.ci;
    if (ci < 0 || ci >= beliefs.num_ci())
      throw std::invalid_argument("cc_expected_utility: entry CI index out of range");
    const auto& p_row = beliefs.p[static_cast<std::size_t>(ci)];
    const auto& q_row = beliefs.q[static_cast<std::size_t>(ci)];
    if (p_row.size() != ladder.w_levels.size() || q_row.size() != ladder.theta_levels.size())
      throw std::invalid_argument("cc_expected_utility: belief row/ladder size mismatch");

    double expected_theta = 0.0;
    for (std::size_t kk = 0; kk < q_row.size(); ++kk)
      expected_theta += q_row[kk] * ladder.theta_levels[kk];

    double expected_margin = 0.0;
    for (std::size_t j = 0; j < p_row.size(); ++j)
      expected_margin += p_row[j] * ladder.w_levels[j] *
                         (ladder.reward_rates[j] * entry.resources - entry.resources);

    total += expected_theta * expected_margin;
  }
  return total;
}

double composite_type(const TypeLadder& ladder, TypePair type) {
  return ladder.theta_levels[static_cast<std::size_t>(type.theta_index)] *
         ladder.w_levels[static_cast<std::size_t>(type.w_index)];
}

namespace {

int argmax_low_tie(const std::vector<double>& row) {
  int best = 0;
  for (std::size_t j = 1; j < row.size(); ++j)
    if (row[j] > row[static_cast<std::size_t>(best)]) best = static_cast<int>(j);
  return best;
}

}  // namespace

std::vector<TypePair> assign_types(const BeliefMatrix& beliefs) {
  std::vector<TypePair> types;
  types.reserve(beliefs.p.size());
  for (std::size_t i = 0; i < beliefs.p.size(); ++i)
    types.push_back({argmax_low_tie(beliefs.p[i]), argmax_low_tie(beliefs.q[i])});
  return types;
}

std::vector<int> order_by_composite(const TypeLadder& ladder,
                                    const std::vector<TypePair>& types) {
  std::vector<int> order(types.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return composite_type(ladder, types[static_cast<std::size_t>(a)]) <
           composite_type(ladder, types[static_cast<std::size_t>(b)]);
  });
  return order;
}

SortedScenario sorted_by_assigned_type(const Scenario& scenario) {
  const auto types = assign_types(scenario.beliefs);
  const auto order = order_by_composite(scenario.ladder, types);

  Scenario sorted = scenario;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto src = static_cast<std::size_t>(order[pos]);
    sorted.beliefs.p[pos] = scenario.beliefs.p[src];
    sorted.beliefs.q[pos] = scenario.beliefs.q[src];
    if (src < scenario.true_types.size())
      sorted.true_types[pos] = scenario.true_types[src];
  }
  return {std::move(sorted), order};
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report = validate_ladder(scenario.ladder);
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  const int n = scenario.num_ci();
  if (n < 1) fail("CI_COUNT: at least one infrastructure required");
  if (scenario.beliefs.q.size() != scenario.beliefs.p.size())
    fail("BELIEF_ROWS: p and q must have one row per infrastructure");

  constexpr double kRowSumTol = 1e-9;
  auto check_rows = [&](const std::vector<std::vector<double>>& rows, std::size_t width,
                        const char* name) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != width) {
        fail(std::string(name) + "_WIDTH: row " + std::to_string(i) + " has wrong length");
        continue;
      }
      double sum = 0.0;
      bool in_range = true;
      for (double x : rows[i]) {
        sum += x;
        if (x < 0.0 || x > 1.0) in_range = false;
      }
      if (!in_range)
        fail(std::string(name) + "_RANGE: row " + std::to_string(i) + " has entries outside [0,1]");
      if (std::abs(sum - 1.0) > kRowSumTol)
        fail(std::string(name) + "_STOCHASTIC: row " + std::to_string(i) + " sums to " +
             std::to_string(sum));
    }
  };
  check_rows(scenario.beliefs.p, scenario.ladder.w_levels.size(), "P");
  check_rows(scenario.beliefs.q, scenario.ladder.theta_levels.size(), "Q");

  if (!(scenario.beta > 0.0 && scenario.beta < 1.0))
    fail("BETA_RANGE: beta must be in (0,1)");
  if (!(scenario.v > 0.0)) fail("V_POSITIVE: valuation rate must be positive");
  if (!(scenario.t_max > 0.0)) fail("TMAX_POSITIVE: total resources must be positive");

  if (!scenario.true_types.empty()) {
    if (static_cast<int>(scenario.true_types.size()) != n)
      fail("TRUE_TYPES_COUNT: one true type per infrastructure required");
    for (const TypePair& t : scenario.true_types) {
      if (t.w_index < 0 || t.w_index >= scenario.ladder.num_w() || t.theta_index < 0 ||
          t.theta_index >= scenario.ladder.num_theta()) {
        fail("TRUE_TYPES_RANGE: type index out of range");
        break;
      }
    }
  }

  return report;
}

}  // namespace cip
