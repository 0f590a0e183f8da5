#pragma once

#include <string>
#include <vector>

namespace cip {

/// Ordered vulnerability/criticality type system shared by all infrastructures.
///
/// Vulnerability levels w_1 < ... < w_M carry a reward rate and a minimum
/// resource amount each; criticality levels theta_1 < ... < theta_K act as
/// sub-types: the separation property theta_K * w_i <= theta_1 * w_{i+1}
/// keeps any criticality refinement below the next vulnerability level.
struct TypeLadder {
  std::vector<double> w_levels;
  std::vector<double> theta_levels;
  std::vector<double> reward_rates;  // one per w level, strictly increasing
  std::vector<double> t_min;         // minimum resources per w level, nondecreasing

  int num_w() const { return static_cast<int>(w_levels.size()); }
  int num_theta() const { return static_cast<int>(theta_levels.size()); }
};

/// The control center's probabilistic knowledge: row i gives the probability
/// that infrastructure i belongs to each vulnerability (p) / criticality (q)
/// level. Rows are stochastic.
struct BeliefMatrix {
  std::vector<std::vector<double>> p;  // N x M
  std::vector<std::vector<double>> q;  // N x K

  int num_ci() const { return static_cast<int>(p.size()); }
};

/// A (vulnerability, criticality) level pair, by 0-based level index.
struct TypePair {
  int w_index = 0;
  int theta_index = 0;

  friend bool operator==(const TypePair&, const TypePair&) = default;
};

/// Full problem instance. true_types are hidden from the contract designer;
/// only infrastructure agents and evaluation code read them.
struct Scenario {
  TypeLadder ladder;
  BeliefMatrix beliefs;
  std::vector<TypePair> true_types;
  double t_max = 0.0;
  double beta = 0.5;  // infrastructure cost parameter, in (0,1)
  double v = 1.0;     // valuation rate, V(T) = v*T

  int num_ci() const { return beliefs.num_ci(); }
};

/// One offered contract: resources t and the reward the infrastructure pays
/// back, plus the type the designer built the entry for.
struct ContractEntry {
  int ci = 0;  // index of the infrastructure in the owning scenario
  TypePair assigned;
  double resources = 0.0;
  double reward = 0.0;
};

/// Contract menu in ascending order of assigned composite type theta*w.
struct ContractMenu {
  std::vector<ContractEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks the ladder's ordering, separation, rate and minimum-resource
/// invariants. Violations are reported, not thrown.
ValidationReport validate_ladder(const TypeLadder& ladder);

/// Generates k strictly increasing criticality levels whose total spread
/// theta_K/theta_1 stays within the tightest adjacent w ratio, so the
/// separation property holds by construction. spread in (0,1] scales the
/// ratio toward that bound.
std::vector<double> make_theta_ladder(const std::vector<double>& w_levels, int k,
                                      double spread);

/// Infrastructure utility theta*w*v*t - beta*(reward_rate*t).
double ci_utility(double theta, double w, double t, double reward_rate, double beta,
                  double v);

/// Control-center utility theta*w*(reward_rate*t - t) for one known type.
double cc_utility_single(double theta, double w, double t, double reward_rate);

/// Expected control-center utility over belief rows:
///   sum_i (sum_k q_ik theta_k) * (sum_j p_ij w_j (r_j*T_i - T_i)).
/// The inner reward applies the rate of the hypothesis level j to entry i's
/// resources. Throws std::invalid_argument on dimension mismatch.
double cc_expected_utility(const ContractMenu& menu, const BeliefMatrix& beliefs,
                           const TypeLadder& ladder);

double composite_type(const TypeLadder& ladder, TypePair type);

/// Modal type per infrastructure (argmax of each belief row, ties toward the
/// lower level index).
std::vector<TypePair> assign_types(const BeliefMatrix& beliefs);

/// Permutation of CI indices ascending by assigned composite type, ties by
/// lower CI index.
std::vector<int> order_by_composite(const TypeLadder& ladder,
                                    const std::vector<TypePair>& types);

/// Scenario with CI rows permuted so assigned composite types are ascending.
/// Returns the permuted scenario and the permutation (sorted position ->
/// original CI index).
struct SortedScenario {
  Scenario scenario;
  std::vector<int> order;
};
SortedScenario sorted_by_assigned_type(const Scenario& scenario);

/// Structural checks on a scenario: ladder validity, belief row stochasticity,
/// beta/v/t_max ranges, true-type index bounds.
ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace cip
