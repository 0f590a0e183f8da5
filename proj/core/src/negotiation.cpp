#include "cip/negotiation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cip {

namespace {

bool menus_equal(const ContractMenu& a, const ContractMenu& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& x = a.entries[i];
    const auto& y = b.entries[i];
    if (x.ci != y.ci || !(x.assigned == y.assigned) || x.resources != y.resources ||
        x.reward != y.reward)
      return false;
  }
  return true;
}

bool events_equal(const NegotiationEvent& a, const NegotiationEvent& b) {
  return a.kind == b.kind && a.round == b.round && a.ci == b.ci &&
         a.own_entry == b.own_entry && a.chosen_entry == b.chosen_entry &&
         a.feasible == b.feasible && a.cis == b.cis && menus_equal(a.menu, b.menu);
}

}  // namespace

bool operator==(const NegotiationTrace& a, const NegotiationTrace& b) {
  if (a.signatures != b.signatures || a.exclusions != b.exclusions ||
      a.solve_rounds != b.solve_rounds)
    return false;
  if (!menus_equal(a.final_menu, b.final_menu)) return false;
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (!events_equal(a.events[i], b.events[i])) return false;
  return true;
}

int least_critical(const BeliefMatrix& beliefs, std::span<const int> active) {
  if (active.empty()) throw std::invalid_argument("least_critical: empty active set");

  int best_ci = -1;
  int best_level = 0;
  double best_prob = 0.0;
  for (int ci : active) {
    const auto& row = beliefs.q[static_cast<std::size_t>(ci)];
    int level = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] > row[static_cast<std::size_t>(level)]) level = static_cast<int>(j);
    const double prob = row[static_cast<std::size_t>(level)];

    if (best_ci < 0 || level < best_level ||
        (level == best_level && prob > best_prob) ||
        (level == best_level && prob == best_prob && ci < best_ci)) {
      best_ci = ci;
      best_level = level;
      best_prob = prob;
    }
  }
  return best_ci;
}

CiChoice ci_agent_choose(const ContractMenu& menu, double theta, double w, double beta,
                         double v, int own_entry) {
  if (menu.entries.empty()) return {};

  std::vector<double> utility;
  utility.reserve(menu.entries.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const ContractEntry& e : menu.entries) {
    utility.push_back(theta * w * v * e.resources - beta * e.reward);
    best = std::max(best, utility.back());
  }
  if (best < -kFeasibilityTol) return {};  // every entry violates IR under the true type

  // Utilities within the feasibility tolerance of the maximum count as tied,
  // so a binding local IC constraint does not read as a deviation.
  const double tie = kFeasibilityTol * std::max(1.0, std::abs(best));
  if (own_entry >= 0 && own_entry < menu.size() &&
      utility[static_cast<std::size_t>(own_entry)] >= best - tie)
    return {true, own_entry};
  for (std::size_t j = 0; j < utility.size(); ++j)
    if (utility[j] >= best - tie) return {true, static_cast<int>(j)};
  return {};
}

namespace {

Scenario sub_scenario(const Scenario& scenario, const std::vector<int>& cis) {
  Scenario sub;
  sub.ladder = scenario.ladder;
  sub.t_max = scenario.t_max;
  sub.beta = scenario.beta;
  sub.v = scenario.v;
  for (int ci : cis) {
    sub.beliefs.p.push_back(scenario.beliefs.p[static_cast<std::size_t>(ci)]);
    sub.beliefs.q.push_back(scenario.beliefs.q[static_cast<std::size_t>(ci)]);
    if (!scenario.true_types.empty())
      sub.true_types.push_back(scenario.true_types[static_cast<std::size_t>(ci)]);
  }
  return sub;
}

double min_total(const Scenario& scenario, const std::vector<TypePair>& assigned,
                 const std::vector<int>& cis) {
  double total = 0.0;
  for (int ci : cis)
    total += scenario.ladder.t_min[static_cast<std::size_t>(
        assigned[static_cast<std::size_t>(ci)].w_index)];
  return total;
}

}  // namespace

namespace {

// Phases move forward only, except that Offered may fall back to Designing
// for another solve round.
void advance(NegotiationState& state, NegotiationPhase next) {
  const bool redesign =
      state.phase == NegotiationPhase::Offered && next == NegotiationPhase::Designing;
  if (!redesign && next < state.phase)
    throw std::logic_error("run_negotiation: phase regression");
  state.phase = next;
}

}  // namespace

NegotiationTrace run_negotiation(const Scenario& scenario, int max_rounds) {
  const int n = scenario.num_ci();
  if (n < 1) throw std::invalid_argument("run_negotiation: at least one infrastructure required");
  if (max_rounds < 1) max_rounds = 2 * n;

  const std::vector<TypePair> assigned = assign_types(scenario.beliefs);

  NegotiationTrace trace;
  auto emit = [&](NegotiationEvent e) { trace.events.push_back(std::move(e)); };

  NegotiationState state;
  state.active.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) state.active[static_cast<std::size_t>(i)] = i;

  {
    NegotiationEvent e;
    e.kind = NegotiationEvent::Kind::Declared;
    emit(e);
    advance(state, NegotiationPhase::RequestsReceived);
    e.kind = NegotiationEvent::Kind::RequestsReceived;
    e.cis = state.active;
    emit(e);
  }

  int round = 0;
  while (!state.active.empty() && round < max_rounds) {
    ++round;
    advance(state, NegotiationPhase::Designing);
    const Scenario sub = sub_scenario(scenario, state.active);
    SolveResult solved = solve_optimal(sub);

    {
      NegotiationEvent e;
      e.kind = NegotiationEvent::Kind::SolveAttempt;
      e.round = round;
      e.feasible = solved.status == SolveStatus::Optimal;
      e.cis = state.active;
      emit(e);
    }
    trace.solve_rounds = round;

    if (solved.status != SolveStatus::Optimal) {
      const int victim = least_critical(scenario.beliefs, state.active);
      state.active.erase(std::find(state.active.begin(), state.active.end(), victim));
      state.excluded.emplace_back(victim, round);
      trace.exclusions.emplace_back(victim, round);
      NegotiationEvent e;
      e.kind = NegotiationEvent::Kind::Excluded;
      e.round = round;
      e.ci = victim;
      emit(e);
      continue;
    }

    // Translate sub-scenario CI indices back to the caller's.
    state.offers = solved.menu;
    for (ContractEntry& entry : state.offers.entries)
      entry.ci = state.active[static_cast<std::size_t>(entry.ci)];

    advance(state, NegotiationPhase::Offered);
    {
      NegotiationEvent e;
      e.kind = NegotiationEvent::Kind::Offered;
      e.round = round;
      e.menu = state.offers;
      emit(e);
    }

    std::vector<int> non_acceptors;
    for (int pos = 0; pos < state.offers.size(); ++pos) {
      const int ci = state.offers.entries[static_cast<std::size_t>(pos)].ci;
      const TypePair truth = scenario.true_types.empty()
                                 ? assigned[static_cast<std::size_t>(ci)]
                                 : scenario.true_types[static_cast<std::size_t>(ci)];
      const double theta =
          scenario.ladder.theta_levels[static_cast<std::size_t>(truth.theta_index)];
      const double w = scenario.ladder.w_levels[static_cast<std::size_t>(truth.w_index)];
      const CiChoice choice =
          ci_agent_choose(state.offers, theta, w, scenario.beta, scenario.v, pos);

      NegotiationEvent e;
      e.kind = NegotiationEvent::Kind::Choice;
      e.round = round;
      e.ci = ci;
      e.own_entry = pos;
      e.chosen_entry = choice.accepted ? choice.entry : -1;
      emit(e);

      if (!choice.accepted || choice.entry != pos) non_acceptors.push_back(ci);
    }

    if (non_acceptors.empty()) {
      advance(state, NegotiationPhase::Signed);
      state.signatures = state.active;
      trace.final_menu = state.offers;
      trace.signatures = state.signatures;
      NegotiationEvent e;
      e.kind = NegotiationEvent::Kind::Signed;
      e.round = round;
      e.cis = trace.signatures;
      emit(e);
      return trace;
    }

    // Non-acceptors are out of the protocol; freed budget lets previously
    // excluded CIs back in, most recently excluded first.
    for (int ci : non_acceptors)
      state.active.erase(std::find(state.active.begin(), state.active.end(), ci));

    for (int idx = static_cast<int>(state.excluded.size()) - 1; idx >= 0; --idx) {
      const int cand = state.excluded[static_cast<std::size_t>(idx)].first;
      std::vector<int> widened = state.active;
      widened.push_back(cand);
      if (min_total(scenario, assigned, widened) <= scenario.t_max) {
        state.active.push_back(cand);
        std::sort(state.active.begin(), state.active.end());
        state.excluded.erase(state.excluded.begin() + idx);
        NegotiationEvent e;
        e.kind = NegotiationEvent::Kind::Readmitted;
        e.round = round;
        e.ci = cand;
        emit(e);
      }
    }
  }

  advance(state, NegotiationPhase::Signed);
  NegotiationEvent e;
  e.kind = NegotiationEvent::Kind::Signed;
  e.round = round;
  emit(e);
  return trace;
}

}  // namespace cip
