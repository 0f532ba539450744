#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "deon/simulate.hpp"

namespace deon {

/// The inner agent's world: two intention actions (G chooses a Good action,
/// B a Bad one) and a deontology that blesses exactly the all-G histories.
inline const char* homunculus_inner_spec_text() {
  return "percepts: ok err\nactions: G B\ngood: (G _p)*\n";
}

/// Table mapping (inner intention, 1-based cycle) to the outer action the
/// rest of the agent actually performs. A per-intention default plus
/// per-cycle overrides; looking up a pair with neither raises
/// MappingIncomplete.
class IntentionMapping {
 public:
  IntentionMapping(Alphabet inner, Alphabet outer)
      : inner_(std::move(inner)), outer_(std::move(outer)) {}

  IntentionMapping& set_default(std::string_view intention, std::string_view outer_action) {
    defaults_[key(intention)] = outer_action_symbol(outer_action);
    return *this;
  }

  IntentionMapping& set_at(std::string_view intention, int cycle, std::string_view outer_action) {
    overrides_[{key(intention), cycle}] = outer_action_symbol(outer_action);
    return *this;
  }

  Symbol outer_action(Symbol intention, int cycle) const {
    int k = intention.index;
    if (auto it = overrides_.find({k, cycle}); it != overrides_.end()) return it->second;
    if (auto it = defaults_.find(k); it != defaults_.end()) return it->second;
    fail(Errc::mapping_incomplete, "no outer action for intention '" + inner_.name(intention) +
                                       "' at cycle " + std::to_string(cycle));
  }

  const Alphabet& inner() const { return inner_; }
  const Alphabet& outer() const { return outer_; }

 private:
  int key(std::string_view intention) const {
    Symbol s = inner_.require(intention);
    if (!s.is_action()) fail(Errc::unknown_symbol, "intentions are inner actions");
    return s.index;
  }
  Symbol outer_action_symbol(std::string_view n) const {
    Symbol s = outer_.require(n);
    if (!s.is_action()) fail(Errc::unknown_symbol, "mapping targets must be outer actions");
    return s;
  }

  Alphabet inner_;
  Alphabet outer_;
  std::map<int, Symbol> defaults_;
  std::map<std::pair<int, int>, Symbol> overrides_;
};

/// Juxtaposes a perfectly compliant inner agent with the outer behaviour the
/// mapping produces: provably good intentions, arbitrary outer conduct.
struct HomunculusReport {
  History inner_history;
  History outer_history;
  double inner_compliance = 0.0;                // fraction of inner prefixes in inner G
  std::optional<int> outer_compliance_cycle;    // 1-based first outer violation, if any

  HomunculusReport(Alphabet inner, Alphabet outer)
      : inner_history(std::move(inner)), outer_history(std::move(outer)) {}
};

/// Runs the constant-G inner agent for `cycles` cycles while the outer action
/// at each cycle is mapping(intention, cycle); percepts on both sides are the
/// first declared ones, keeping the demo deterministic.
inline HomunculusReport homunculus_demo(const Deontology& outer, const IntentionMapping& mapping,
                                        int cycles) {
  Deontology inner = compile(parse_spec(homunculus_inner_spec_text()));
  if (!(mapping.inner() == inner.alphabet))
    fail(Errc::alphabet_mismatch, "mapping inner alphabet must match the homunculus alphabet");
  if (!(mapping.outer() == outer.alphabet))
    fail(Errc::alphabet_mismatch, "mapping outer alphabet must match the outer deontology");

  HomunculusReport report(inner.alphabet, outer.alphabet);
  Symbol intend_good = inner.alphabet.require("G");
  Symbol inner_percept = inner.alphabet.percept(0);
  Symbol outer_percept = outer.alphabet.percept(0);

  int inner_state = inner.dfa.start;
  int outer_state = outer.dfa.start;
  int inner_good_prefixes = 0;
  for (int k = 1; k <= cycles; ++k) {
    Symbol outer_action = mapping.outer_action(intend_good, k);
    report.inner_history = report.inner_history.extended(intend_good, inner_percept);
    report.outer_history = report.outer_history.extended(outer_action, outer_percept);
    inner_state = inner.step_cycle(inner_state, intend_good, inner_percept);
    outer_state = outer.step_cycle(outer_state, outer_action, outer_percept);
    if (inner.dfa.accepting[static_cast<std::size_t>(inner_state)]) ++inner_good_prefixes;
    if (!outer.dfa.accepting[static_cast<std::size_t>(outer_state)] &&
        !report.outer_compliance_cycle)
      report.outer_compliance_cycle = k;
  }
  report.inner_compliance =
      cycles == 0 ? 1.0 : static_cast<double>(inner_good_prefixes) / cycles;
  return report;
}

/// The mapping used by the shipped demo: the outer agent performs
/// `compliant` every cycle except `violate_at` (0 disables the violation).
inline IntentionMapping demo_mapping(const Alphabet& inner, const Alphabet& outer,
                                     std::string_view compliant, std::string_view violating,
                                     int violate_at) {
  IntentionMapping m(inner, outer);
  m.set_default("G", compliant);
  m.set_default("B", violating);
  if (violate_at > 0) m.set_at("G", violate_at, violating);
  return m;
}

}  // namespace deon
