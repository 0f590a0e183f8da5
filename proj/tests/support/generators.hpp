#pragma once

// Random scenario builders shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cip/domain.hpp"
#include "cip/feasibility.hpp"
#include "cip/random.hpp"
#include "cip/solver.hpp"

namespace cip::testgen {

inline std::vector<double> concentrated_row(int size, int modal, double mass) {
  std::vector<double> row(static_cast<std::size_t>(size),
                          size > 1 ? (1.0 - mass) / (size - 1) : 0.0);
  row[static_cast<std::size_t>(modal)] = size > 1 ? mass : 1.0;
  return row;
}

struct LadderParams {
  int num_w = 3;
  int num_theta = 3;
  double w_ratio_lo = 2.5;
  double w_ratio_hi = 4.0;
  double theta_spread_lo = 0.25;
  double theta_spread_hi = 0.6;
  bool integer_mins = false;
};

inline TypeLadder random_ladder(Rng& rng, const LadderParams& params) {
  TypeLadder ladder;
  ladder.w_levels.push_back(rng.uniform(0.6, 1.5));
  for (int j = 1; j < params.num_w; ++j)
    ladder.w_levels.push_back(ladder.w_levels.back() *
                              rng.uniform(params.w_ratio_lo, params.w_ratio_hi));
  ladder.theta_levels = make_theta_ladder(
      ladder.w_levels, params.num_theta,
      rng.uniform(params.theta_spread_lo, params.theta_spread_hi));
  ladder.reward_rates.push_back(rng.uniform(2.0, 4.0));
  for (int j = 1; j < params.num_w; ++j)
    ladder.reward_rates.push_back(ladder.reward_rates.back() + rng.uniform(2.0, 4.0));
  if (params.integer_mins) {
    ladder.t_min.push_back(rng.uniform_int(10, 40));
    for (int j = 1; j < params.num_w; ++j)
      ladder.t_min.push_back(ladder.t_min.back() + rng.uniform_int(20, 60));
  } else {
    ladder.t_min.push_back(rng.uniform(5.0, 40.0));
    for (int j = 1; j < params.num_w; ++j)
      ladder.t_min.push_back(ladder.t_min.back() + rng.uniform(10.0, 80.0));
  }
  return ladder;
}

/// Two-CI scenario in the regime where the min-to-the-low-type allocation is
/// provably optimal: distinct ascending vulnerability levels, nonnegative
/// low-type margin, upward local IC trivially slack for the low type, the
/// high type carrying the larger objective weight, and a budget the minimums
/// fit under.
inline Scenario regime_two_ci(Rng& rng) {
  for (;;) {
    LadderParams params;
    params.num_w = rng.uniform_int(2, 3);
    params.num_theta = rng.uniform_int(1, 3);
    params.theta_spread_lo = 0.3;
    params.theta_spread_hi = 1.0;

    Scenario scenario;
    scenario.ladder = random_ladder(rng, params);
    scenario.beta = rng.uniform(0.3, 0.7);
    scenario.v = rng.uniform(1.5, 3.0);

    const int low_w = rng.uniform_int(0, params.num_w - 2);
    const int high_w = rng.uniform_int(low_w + 1, params.num_w - 1);
    const TypePair low = {low_w, rng.uniform_int(0, params.num_theta - 1)};
    const TypePair high = {high_w, rng.uniform_int(0, params.num_theta - 1)};

    const double mass = rng.uniform(0.55, 0.95);
    scenario.beliefs.p = {concentrated_row(params.num_w, low.w_index, mass),
                          concentrated_row(params.num_w, high.w_index, mass)};
    scenario.beliefs.q = {concentrated_row(params.num_theta, low.theta_index, mass),
                          concentrated_row(params.num_theta, high.theta_index, mass)};
    scenario.true_types = {low, high};

    const double comp_low = composite_type(scenario.ladder, low);
    const double comp_high = composite_type(scenario.ladder, high);
    if (!(comp_low < comp_high - 1e-9)) continue;

    const double rate_low = scenario.ladder.reward_rates[static_cast<std::size_t>(low_w)];
    const double rate_high = scenario.ladder.reward_rates[static_cast<std::size_t>(high_w)];
    if (comp_low * scenario.v - scenario.beta * rate_low < 0.02) continue;       // IR(1)
    if (comp_low * scenario.v - scenario.beta * rate_high > -0.02) continue;     // ULIC slack

    const auto c = objective_coefficients(scenario);
    if (!(c[1] > c[0] + 1e-9)) continue;

    const double min_low = scenario.ladder.t_min[static_cast<std::size_t>(low_w)];
    const double min_high = scenario.ladder.t_min[static_cast<std::size_t>(high_w)];
    scenario.t_max = min_low + min_high + rng.uniform(30.0, 400.0);

    // Scenario counts as feasible when the closed-form point satisfies the
    // relaxed system; retry otherwise.
    const ConstraintSet relaxed =
        build_relaxed_constraints(scenario, {low, high});
    const std::vector<double> closed_form = {min_low, scenario.t_max - min_low};
    if (!evaluate_constraints(relaxed, closed_form).satisfied) continue;
    return scenario;
  }
}

/// Small scenario with integer minimums and budget so a unit grid aligns with
/// the vertices the solver tends to land on. Beliefs are concentrated on
/// ascending assigned types; margins are bounded away from zero. distinct_w
/// gives every CI its own vulnerability level — adjacent same-w CIs pin their
/// allocations equal, a line a coarse grid usually misses.
inline Scenario small_grid_scenario(Rng& rng, int n, bool distinct_w = false) {
  for (;;) {
    LadderParams params;
    params.num_w = rng.uniform_int(distinct_w ? std::max(3, n) : 3, 4);
    params.num_theta = rng.uniform_int(2, 4);
    params.integer_mins = true;

    Scenario scenario;
    scenario.ladder = random_ladder(rng, params);
    scenario.beta = rng.uniform(0.3, 0.7);
    scenario.v = rng.uniform(1.5, 3.0);

    std::vector<TypePair> assigned(static_cast<std::size_t>(n));
    if (distinct_w) {
      std::vector<int> levels(static_cast<std::size_t>(params.num_w));
      for (int j = 0; j < params.num_w; ++j) levels[static_cast<std::size_t>(j)] = j;
      for (int j = params.num_w - 1; j > 0; --j)
        std::swap(levels[static_cast<std::size_t>(j)],
                  levels[static_cast<std::size_t>(rng.uniform_int(0, j))]);
      levels.resize(static_cast<std::size_t>(n));
      std::sort(levels.begin(), levels.end());
      for (int i = 0; i < n; ++i)
        assigned[static_cast<std::size_t>(i)] = {levels[static_cast<std::size_t>(i)],
                                                 rng.uniform_int(0, params.num_theta - 1)};
    } else {
      for (auto& t : assigned)
        t = {rng.uniform_int(0, params.num_w - 1), rng.uniform_int(0, params.num_theta - 1)};
    }
    std::stable_sort(assigned.begin(), assigned.end(), [&](TypePair a, TypePair b) {
      return composite_type(scenario.ladder, a) < composite_type(scenario.ladder, b);
    });

    bool margins_ok = true;
    double min_total = 0.0;
    for (const TypePair& t : assigned) {
      const double rate = scenario.ladder.reward_rates[static_cast<std::size_t>(t.w_index)];
      if (composite_type(scenario.ladder, t) * scenario.v - scenario.beta * rate < 0.3)
        margins_ok = false;
      min_total += scenario.ladder.t_min[static_cast<std::size_t>(t.w_index)];
    }
    if (!margins_ok) continue;

    const double mass = rng.uniform(0.6, 0.9);
    for (const TypePair& t : assigned) {
      scenario.beliefs.p.push_back(concentrated_row(params.num_w, t.w_index, mass));
      scenario.beliefs.q.push_back(concentrated_row(params.num_theta, t.theta_index, mass));
      scenario.true_types.push_back(t);
    }
    scenario.t_max = min_total + rng.uniform_int(20, 250);
    return scenario;
  }
}

/// Integer scenario built for unit-grid oracle comparisons. Reward rates sit
/// inside the separation window theta_K*w_j*v/beta <= r_{j+1} <=
/// theta_1*w_{j+1}*v/beta (nonempty exactly because of the ladder separation
/// property), which makes every upward local IC slack for any allocation, and
/// minimums are spaced so the downward chain is slack at the
/// minimums-then-remainder vertex. With ascending objective weights that
/// vertex is the optimum, it is integral, and a unit grid contains it.
inline Scenario grid_oracle_scenario(Rng& rng, int n) {
  for (;;) {
    const int num_w = rng.uniform_int(std::max(3, n), 4);
    const int num_theta = rng.uniform_int(2, 4);

    Scenario scenario;
    scenario.beta = rng.uniform(0.3, 0.7);
    scenario.v = rng.uniform(1.5, 3.0);

    TypeLadder& ladder = scenario.ladder;
    ladder.w_levels.push_back(rng.uniform(0.9, 1.5));
    for (int j = 1; j < num_w; ++j)
      ladder.w_levels.push_back(ladder.w_levels.back() * rng.uniform(2.6, 3.5));
    ladder.theta_levels = make_theta_ladder(ladder.w_levels, num_theta, rng.uniform(0.25, 0.4));
    const double theta_lo = ladder.theta_levels.front();
    const double theta_hi = ladder.theta_levels.back();

    const double scale = scenario.v / scenario.beta;
    ladder.reward_rates.push_back(
        rng.uniform(1.2, std::max(1.25, 0.95 * theta_lo * ladder.w_levels[0] * scale)));
    bool window_ok = true;
    for (int j = 1; j < num_w; ++j) {
      const double lo = 1.05 * theta_hi * ladder.w_levels[static_cast<std::size_t>(j - 1)] * scale;
      const double hi = 0.95 * theta_lo * ladder.w_levels[static_cast<std::size_t>(j)] * scale;
      const double floor = std::max(lo, ladder.reward_rates.back() + 0.1);
      if (!(floor < hi)) {
        window_ok = false;
        break;
      }
      ladder.reward_rates.push_back(rng.uniform(floor, hi));
    }
    if (!window_ok) continue;

    // Space minimums so any downward constraint holds at the minimums
    // themselves: the worst ratio is at the low end of a level's composites.
    ladder.t_min.push_back(rng.uniform_int(10, 40));
    for (int j = 1; j < num_w; ++j) {
      double required = ladder.t_min.back() + 10.0;
      for (int jp = 0; jp < j; ++jp) {
        const double own = theta_lo * ladder.w_levels[static_cast<std::size_t>(j)] * scenario.v -
                           scenario.beta * ladder.reward_rates[static_cast<std::size_t>(j)];
        const double cross = theta_lo * ladder.w_levels[static_cast<std::size_t>(j)] * scenario.v -
                             scenario.beta * ladder.reward_rates[static_cast<std::size_t>(jp)];
        required = std::max(required, cross / own * ladder.t_min[static_cast<std::size_t>(jp)]);
      }
      ladder.t_min.push_back(std::ceil(required) + rng.uniform_int(0, 30));
    }

    // Distinct ascending levels per CI; same-level CIs would pin equal
    // allocations, which a unit grid misses for odd budgets.
    std::vector<int> levels(static_cast<std::size_t>(num_w));
    for (int j = 0; j < num_w; ++j) levels[static_cast<std::size_t>(j)] = j;
    for (int j = num_w - 1; j > 0; --j)
      std::swap(levels[static_cast<std::size_t>(j)],
                levels[static_cast<std::size_t>(rng.uniform_int(0, j))]);
    levels.resize(static_cast<std::size_t>(n));
    std::sort(levels.begin(), levels.end());

    double min_total = 0.0;
    const double mass = rng.uniform(0.6, 0.9);
    for (int i = 0; i < n; ++i) {
      const TypePair t = {levels[static_cast<std::size_t>(i)],
                          rng.uniform_int(0, num_theta - 1)};
      scenario.beliefs.p.push_back(concentrated_row(num_w, t.w_index, mass));
      scenario.beliefs.q.push_back(concentrated_row(num_theta, t.theta_index, mass));
      scenario.true_types.push_back(t);
      min_total += ladder.t_min[static_cast<std::size_t>(t.w_index)];
    }
    scenario.t_max = min_total + rng.uniform_int(20, 250);

    const auto c = objective_coefficients(scenario);
    bool ascending = true;
    for (std::size_t i = 1; i < c.size(); ++i)
      if (!(c[i] > c[i - 1] + 1e-9)) ascending = false;
    if (!ascending) continue;
    return scenario;
  }
}

/// Ascending truthful scenario for negotiation studies; true types equal
/// assigned modal types.
inline Scenario truthful_scenario(Rng& rng, int n) { return small_grid_scenario(rng, n); }

/// Same shape, but true types are re-rolled independently of the beliefs.
inline Scenario misreported_scenario(Rng& rng, int n) {
  Scenario scenario = small_grid_scenario(rng, n);
  for (TypePair& t : scenario.true_types)
    t = {rng.uniform_int(0, scenario.ladder.num_w() - 1),
         rng.uniform_int(0, scenario.ladder.num_theta() - 1)};
  return scenario;
}

}  // namespace cip::testgen
