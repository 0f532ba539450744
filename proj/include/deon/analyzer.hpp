#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "deon/automaton.hpp"
#include "deon/transducer.hpp"

namespace deon {

enum class Triviality { empty_g, full_g, non_trivial };

inline const char* triviality_name(Triviality t) {
  switch (t) {
    case Triviality::empty_g: return "EmptyG";
    case Triviality::full_g: return "FullG";
    case Triviality::non_trivial: return "NonTrivial";
  }
  return "?";
}

enum class HistoryClass { good, amendable, dead };

inline const char* history_class_name(HistoryClass c) {
  switch (c) {
    case HistoryClass::good: return "GOOD";
    case HistoryClass::amendable: return "AMENDABLE";
    case HistoryClass::dead: return "DEAD";
  }
  return "?";
}

/// Per-state action safety. strongly_safe(q): actions Good for every next
/// percept; weakly_safe(q, x): actions Good for that particular percept.
/// Rows exist for every boundary-parity state; action lists follow
/// declaration order. strongly_safe(q) is always a subset of every
/// weakly_safe(q, x).
struct SafeActionTable {
  std::unordered_map<int, std::vector<Symbol>> strongly_safe;
  std::unordered_map<int, std::vector<std::vector<Symbol>>> weakly_safe;

  const std::vector<Symbol>& strong(int state) const { return strongly_safe.at(state); }
  const std::vector<Symbol>& weak(int state, Symbol percept) const {
    return weakly_safe.at(state)[static_cast<std::size_t>(percept.index)];
  }
};

inline SafeActionTable build_safe_action_table(const Deontology& d) {
  SafeActionTable table;
  for (int q = 0; q < d.dfa.num_states; ++q) {
    if (d.parity[static_cast<std::size_t>(q)] != Parity::boundary) continue;
    std::vector<Symbol> strong;
    std::vector<std::vector<Symbol>> weak(
        static_cast<std::size_t>(d.alphabet.num_percepts()));
    for (int a = 0; a < d.alphabet.num_actions(); ++a) {
      Symbol action = d.alphabet.action(a);
      int mid = d.step(q, action);
      bool all = true;
      for (int p = 0; p < d.alphabet.num_percepts(); ++p) {
        Symbol percept = d.alphabet.percept(p);
        if (d.dfa.accepting[static_cast<std::size_t>(d.step(mid, percept))])
          weak[static_cast<std::size_t>(p)].push_back(action);
        else
          all = false;
      }
      if (all) strong.push_back(action);
    }
    table.strongly_safe.emplace(q, std::move(strong));
    table.weakly_safe.emplace(q, std::move(weak));
  }
  return table;
}

/// Accepting states reachable from the start — the automaton-level image of
/// the realizable Good histories. In the canonical (trim) automaton this is
/// exactly the accepting set; kept as an operation so callers state intent.
inline std::vector<int> good_reachable_states(const Deontology& d) {
  std::vector<int> out;
  for (int q = 0; q < d.dfa.num_states; ++q)
    if (d.dfa.accepting[static_cast<std::size_t>(q)]) out.push_back(q);
  return out;
}

/// EmptyG / FullG / NonTrivial. FullG is decided against the interleaving
/// language, not against all token strings: every properly alternating even
/// prefix must land on an accepting state.
inline Triviality check_trivial(const Deontology& d) {
  if (good_reachable_states(d).empty()) return Triviality::empty_g;
  auto [at_boundary, at_mid] = detail::phase_reach(d.dfa, d.alphabet.num_actions());
  (void)at_mid;
  for (int q = 0; q < d.dfa.num_states; ++q)
    if (at_boundary[static_cast<std::size_t>(q)] && !d.dfa.accepting[static_cast<std::size_t>(q)])
      return Triviality::non_trivial;
  return Triviality::full_g;
}

struct WeakViabilityWitness {
  int state;
  Symbol percept;  // percept with no saving action at that state
};

struct ViabilityReport {
  bool weak = false;
  bool strong = false;
  std::optional<WeakViabilityWitness> weak_witness;
  std::optional<int> strong_witness;  // Good-reachable state with no strongly safe action
};

/// Both quantifier orders over the Good-reachable states. weak is the
/// literal requirement (for every percept there is a saving action); strong
/// is what a pre-percept governor needs (one action safe against every
/// percept). Requirement 1 — the empty history is Good — gates both.
inline ViabilityReport check_viability(const Deontology& d) {
  ViabilityReport report;
  if (!accepts_empty(d)) return report;  // no witness: requirement 1 failed
  SafeActionTable table = build_safe_action_table(d);
  report.weak = true;
  report.strong = true;
  for (int q : good_reachable_states(d)) {
    for (int p = 0; p < d.alphabet.num_percepts() && report.weak; ++p)
      if (table.weak(q, d.alphabet.percept(p)).empty()) {
        report.weak = false;
        report.weak_witness = WeakViabilityWitness{q, d.alphabet.percept(p)};
      }
    if (report.strong && table.strong(q).empty()) {
      report.strong = false;
      report.strong_witness = q;
    }
  }
  return report;
}

struct CiWitness {
  int state;  // boundary state reaching the disagreeing mid state
  Symbol action;
  Symbol percept_a;
  Symbol percept_b;
};

struct CiReport {
  bool independent = false;
  std::optional<CiWitness> witness;
};

/// Consequence-independence: the final percept of a history never changes
/// membership. Checked at every reachable mid-cycle state.
inline CiReport check_consequence_independence(const Deontology& d) {
  for (int q = 0; q < d.dfa.num_states; ++q) {
    if (d.parity[static_cast<std::size_t>(q)] != Parity::boundary) continue;
    for (int a = 0; a < d.alphabet.num_actions(); ++a) {
      Symbol action = d.alphabet.action(a);
      int mid = d.step(q, action);
      bool first = d.dfa.accepting[static_cast<std::size_t>(d.step(mid, d.alphabet.percept(0)))];
      for (int p = 1; p < d.alphabet.num_percepts(); ++p) {
        bool here =
            d.dfa.accepting[static_cast<std::size_t>(d.step(mid, d.alphabet.percept(p)))];
        if (here != first)
          return {false, CiWitness{q, action, d.alphabet.percept(0), d.alphabet.percept(p)}};
      }
    }
  }
  return {true, std::nullopt};
}

/// The safety-game winning region: the largest set W of accepting boundary
/// states where some action lands back in W for every percept. Computed as
/// the greatest fixpoint of the controllable-predecessor operator by
/// iterated removal.
struct GovernableRegion {
  std::vector<int> states;  // ascending
  std::unordered_map<int, std::vector<Symbol>> preserving;  // W-preserving actions per state
  bool contains_start = false;

  bool contains(int q) const { return preserving.count(q) != 0; }
};

inline GovernableRegion governable_region(const Deontology& d) {
  std::vector<char> in_w(static_cast<std::size_t>(d.dfa.num_states), 0);
  for (int q : good_reachable_states(d)) in_w[static_cast<std::size_t>(q)] = 1;

  auto preserving_actions = [&](int q) {
    std::vector<Symbol> out;
    for (int a = 0; a < d.alphabet.num_actions(); ++a) {
      Symbol action = d.alphabet.action(a);
      int mid = d.step(q, action);
      bool all = true;
      for (int p = 0; p < d.alphabet.num_percepts() && all; ++p)
        all = in_w[static_cast<std::size_t>(d.step(mid, d.alphabet.percept(p)))] != 0;
      if (all) out.push_back(action);
    }
    return out;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < d.dfa.num_states; ++q) {
      if (!in_w[static_cast<std::size_t>(q)]) continue;
      if (preserving_actions(q).empty()) {
        in_w[static_cast<std::size_t>(q)] = 0;
        changed = true;
      }
    }
  }

  GovernableRegion region;
  for (int q = 0; q < d.dfa.num_states; ++q)
    if (in_w[static_cast<std::size_t>(q)]) {
      region.states.push_back(q);
      region.preserving.emplace(q, preserving_actions(q));
    }
  region.contains_start = in_w[static_cast<std::size_t>(d.dfa.start)] != 0;
  return region;
}

/// GOOD: h ∈ G. AMENDABLE: not Good, but some continuation returns to G.
/// DEAD: no continuation can repair it.
inline HistoryClass classify_history(const Deontology& d, const History& h) {
  if (!(h.alphabet() == d.alphabet))
    fail(Errc::alphabet_mismatch, "history alphabet differs from the deontology's");
  int q = d.dfa.start;
  for (Symbol s : h.tokens()) q = d.step(q, s);
  if (d.dfa.accepting[static_cast<std::size_t>(q)]) return HistoryClass::good;
  return q == d.dead_state ? HistoryClass::dead : HistoryClass::amendable;
}

// ---------------------------------------------------------------------------
// finite-state policy verification
// ---------------------------------------------------------------------------

/// Evidence that a policy violates the always-Good property: a Good history
/// the policy itself reaches (every even prefix Good), the action it picks
/// there, and a percept making the extension non-Good.
struct Counterexample {
  History history;
  Symbol action;
  Symbol percept;
  int violation_cycle;  // 1-based: cycles(history) + 1
};

using Verdict = std::optional<Counterexample>;  // empty = Verified

/// Decides whether the transducer always chooses Good actions along Good
/// histories of its own play. Breadth-first search over the product of the
/// transducer's states with the automaton's Good states, so a returned
/// counterexample has minimal cycle count; ties prefer the earliest percept
/// in declaration order. Verification of arbitrary policies is not offered —
/// only the finite-state product makes the question decidable.
inline Verdict verify_policy(const Deontology& d, const PolicyTransducer& t) {
  if (!(t.alphabet == d.alphabet))
    fail(Errc::alphabet_mismatch, "transducer alphabet differs from the deontology's");
  for (int q = 0; q < t.num_states(); ++q) {
    if (!t.emit[static_cast<std::size_t>(q)].is_action() ||
        !t.alphabet.contains(t.emit[static_cast<std::size_t>(q)]))
      fail(Errc::partial_policy, "transducer state emits no valid action");
    if (static_cast<int>(t.next[static_cast<std::size_t>(q)].size()) != d.alphabet.num_percepts())
      fail(Errc::partial_policy, "transducer is not total on percepts");
    for (int to : t.next[static_cast<std::size_t>(q)])
      if (to < 0 || to >= t.num_states())
        fail(Errc::partial_policy, "transducer transition leaves the state set");
  }

  if (!accepts_empty(d)) return std::nullopt;  // no Good history is reachable by play

  const int dn = d.dfa.num_states;
  auto pair_id = [&](int qt, int qd) { return qt * dn + qd; };
  std::vector<char> seen(static_cast<std::size_t>(t.num_states()) * static_cast<std::size_t>(dn),
                         0);
  struct Step {
    int parent;  // pair id, -1 for the root
    Symbol action;
    Symbol percept;
  };
  std::unordered_map<int, Step> came_from;
  std::deque<std::pair<int, int>> queue;

  seen[static_cast<std::size_t>(pair_id(t.start, d.dfa.start))] = 1;
  came_from[pair_id(t.start, d.dfa.start)] = {-1, {}, {}};
  queue.emplace_back(t.start, d.dfa.start);

  auto rebuild = [&](int qt, int qd) {
    std::vector<Symbol> tokens;
    int cur = pair_id(qt, qd);
    while (true) {
      const Step& s = came_from.at(cur);
      if (s.parent == -1) break;
      tokens.push_back(s.percept);
      tokens.push_back(s.action);
      cur = s.parent;
    }
    std::reverse(tokens.begin(), tokens.end());
    return History(d.alphabet, std::move(tokens));
  };

  while (!queue.empty()) {
    auto [qt, qd] = queue.front();
    queue.pop_front();
    Symbol y = t.emit[static_cast<std::size_t>(qt)];
    int mid = d.step(qd, y);
    for (int p = 0; p < d.alphabet.num_percepts(); ++p) {
      Symbol x = d.alphabet.percept(p);
      int qd2 = d.step(mid, x);
      if (!d.dfa.accepting[static_cast<std::size_t>(qd2)]) {
        History h = rebuild(qt, qd);
        int cycle = h.cycles() + 1;
        return Counterexample{std::move(h), y, x, cycle};
      }
      int qt2 = t.step(qt, x);
      int id = pair_id(qt2, qd2);
      if (!seen[static_cast<std::size_t>(id)]) {
        seen[static_cast<std::size_t>(id)] = 1;
        came_from[id] = {pair_id(qt, qd), y, x};
        queue.emplace_back(qt2, qd2);
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// aggregate report
// ---------------------------------------------------------------------------

struct AnalysisReport {
  Triviality triviality = Triviality::non_trivial;
  bool accepts_empty = false;
  bool weak_viable = false;
  std::optional<WeakViabilityWitness> weak_witness;
  bool strong_viable = false;
  std::optional<int> strong_witness;
  bool consequence_independent = false;
  std::optional<CiWitness> ci_witness;
  std::size_t governable_region_size = 0;
  bool governable_from_start = false;
};

inline AnalysisReport analyze(const Deontology& d) {
  AnalysisReport r;
  r.triviality = check_trivial(d);
  r.accepts_empty = accepts_empty(d);
  ViabilityReport v = check_viability(d);
  r.weak_viable = v.weak;
  r.weak_witness = v.weak_witness;
  r.strong_viable = v.strong;
  r.strong_witness = v.strong_witness;
  CiReport ci = check_consequence_independence(d);
  r.consequence_independent = ci.independent;
  r.ci_witness = ci.witness;
  GovernableRegion w = governable_region(d);
  r.governable_region_size = w.states.size();
  r.governable_from_start = w.contains_start;
  return r;
}

}  // namespace deon
