#pragma once

#include <span>
#include <string>
#include <vector>

#include "cip/domain.hpp"
#include "cip/solver.hpp"

namespace cip {

enum class NegotiationPhase { Declared, RequestsReceived, Designing, Offered, Signed };

/// Engine state while the control center negotiates. Phases advance
/// monotonically except for the Designing <-> Offered loop.
struct NegotiationState {
  NegotiationPhase phase = NegotiationPhase::Declared;
  std::vector<int> active;                        // CIs currently designed for
  std::vector<std::pair<int, int>> excluded;      // (CI, round excluded), in order
  ContractMenu offers;
  std::vector<int> signatures;
};

struct NegotiationEvent {
  enum class Kind {
    Declared,
    RequestsReceived,
    SolveAttempt,
    Excluded,
    Readmitted,
    Offered,
    Choice,
    Signed
  };
  Kind kind = Kind::Declared;
  int round = 0;
  int ci = -1;           // Excluded / Readmitted / Choice
  int own_entry = -1;    // Choice: menu position designated for the CI
  int chosen_entry = -1; // Choice: picked position, -1 on rejection
  bool feasible = false; // SolveAttempt outcome
  std::vector<int> cis;  // SolveAttempt active set / Signed signatories
  ContractMenu menu;     // Offered: the menu put on the table
};

struct NegotiationTrace {
  std::vector<NegotiationEvent> events;
  ContractMenu final_menu;        // offers signed at the end (empty if none)
  std::vector<int> signatures;    // CI indices that signed
  std::vector<std::pair<int, int>> exclusions;  // (CI, round)
  int solve_rounds = 0;

  friend bool operator==(const NegotiationTrace&, const NegotiationTrace&);
};

/// The active CI whose modal criticality level is lowest; ties on the level go
/// to the higher modal probability, then the lower CI index. Throws on an
/// empty active set.
int least_critical(const BeliefMatrix& beliefs, std::span<const int> active);

struct CiChoice {
  bool accepted = false;
  int entry = -1;  // menu position, valid when accepted
};

/// Self-interested pick: the entry maximizing theta*w*v*T - beta*R under the
/// CI's true type. Rejects when the best utility is negative; ties resolve to
/// the CI's own entry, then the lowest position.
CiChoice ci_agent_choose(const ContractMenu& menu, double theta, double w, double beta,
                         double v, int own_entry);

/// Full protocol: design for the active set, exclude the least critical CI
/// while the program is infeasible, offer, collect accept/reject decisions
/// made under true types, re-admit excluded CIs when rejections free budget,
/// and sign once an offer round is unanimously accepted. max_rounds < 1 means
/// the default cap of 2N solve rounds.
NegotiationTrace run_negotiation(const Scenario& scenario, int max_rounds = -1);

}  // namespace cip
