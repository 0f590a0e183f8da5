#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cip/domain.hpp"

namespace cip {

/// Absolute slack tolerance for all constraint checks. Constraint values are
/// O(1e4) at the default scale, so this is conservative.
inline constexpr double kFeasibilityTol = 1e-9;

enum class Sense { Ge, Eq };

/// One linear constraint over the allocation vector T_1..T_N:
/// coeffs . T  (>=|=)  bound.
struct Constraint {
  std::string label;  // IR(i), IC(i,j), DLIC(i), ULIC(i), MIN(i), BUDGET
  std::vector<double> coeffs;
  double bound = 0.0;
  Sense sense = Sense::Ge;
};

struct ConstraintSet {
  int num_ci = 0;
  std::vector<Constraint> constraints;
};

struct Violation {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs for >=, -(|lhs - rhs|) for =
};

struct FeasibilityReport {
  bool satisfied = true;
  std::vector<Violation> violations;
};

/// Individual rationality at the assigned types: theta*w*v*T - beta*R >= 0
/// per entry.
FeasibilityReport check_ir(const ContractMenu& menu, const TypeLadder& ladder,
                           double beta, double v);

/// All N(N-1) ordered incentive-compatibility pairs at the assigned types.
FeasibilityReport check_ic_full(const ContractMenu& menu, const TypeLadder& ladder,
                                double beta, double v);

/// Resources nondecreasing and realized utilities nondecreasing along the
/// menu's ascending composite-type order. The menu must already be sorted;
/// throws std::invalid_argument otherwise.
FeasibilityReport check_monotonicity(const ContractMenu& menu, const TypeLadder& ladder,
                                     double beta, double v);

/// Relaxed system: DLIC(i) for i=2..N, ULIC(i) for i=1..N-1, IR(1), MIN(i),
/// BUDGET. assigned must be in ascending composite order (throws otherwise)
/// and have one entry per CI.
ConstraintSet build_relaxed_constraints(const Scenario& scenario,
                                        const std::vector<TypePair>& assigned);

/// Full system: IR(i) for all i, IC(i,j) for all ordered pairs, MIN(i), BUDGET.
ConstraintSet build_full_constraints(const Scenario& scenario,
                                     const std::vector<TypePair>& assigned);

/// Evaluates every constraint at T and reports violations beyond the slack
/// tolerance.
FeasibilityReport evaluate_constraints(const ConstraintSet& set, std::span<const double> t);

/// Scenario-level feasibility screen: the budget covers the assigned
/// minimums, and the lowest assigned type can earn a nonnegative margin.
FeasibilityReport check_scenario_feasibility(const Scenario& scenario);

/// Samples random menus satisfying DLIC + ULIC + IR(1) over random valid
/// ladders with ascending assigned types, then checks the full IC system.
/// Returns the fraction of generated menus that pass (expected 1.0).
double verify_theorem1(int trials, std::uint64_t seed);

}  // namespace cip
