#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "deon/alphabet.hpp"

namespace deon {

/// A finite-state policy: one emitted action per state, transitions driven by
/// observed percepts. This is the policy class the verifier can decide.
/// The action a transducer assigns to a history depends only on the
/// history's percept string.
struct PolicyTransducer {
  Alphabet alphabet;
  int start = 0;
  std::vector<Symbol> emit;            // action per state
  std::vector<std::vector<int>> next;  // [state][percept index]
  std::vector<std::string> state_names;

  int num_states() const { return static_cast<int>(emit.size()); }
  int step(int state, Symbol percept) const {
    return next[static_cast<std::size_t>(state)][static_cast<std::size_t>(percept.index)];
  }
};

/// Parses the `.fst` format:
///   start: s0
///   emit: s0 noop
///   on: s0 ok -> s0
/// States are interned in order of first mention. Every state needs an
/// emitted action and a transition for every percept (PartialPolicy
/// otherwise).
inline PolicyTransducer parse_transducer(std::string_view text, const Alphabet& alphabet) {
  PolicyTransducer t;
  t.alphabet = alphabet;
  std::unordered_map<std::string, int> ids;
  auto intern = [&](const std::string& n) {
    auto [it, inserted] = ids.emplace(n, static_cast<int>(t.state_names.size()));
    if (inserted) {
      t.state_names.push_back(n);
      t.emit.push_back(Symbol{SymbolKind::action, -1});
      t.next.emplace_back(static_cast<std::size_t>(alphabet.num_percepts()), -1);
    }
    return it->second;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int start = -1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ws(line);
    std::string key;
    if (!(ws >> key)) continue;
    auto bad = [&](const std::string& msg) {
      fail(Errc::format_error, "line " + std::to_string(line_no) + ": " + msg);
    };
    if (key == "start:") {
      std::string name, extra;
      if (!(ws >> name) || (ws >> extra)) bad("expected 'start: <state>'");
      if (start != -1) bad("duplicate start line");
      start = intern(name);
    } else if (key == "emit:") {
      std::string state, action, extra;
      if (!(ws >> state >> action) || (ws >> extra)) bad("expected 'emit: <state> <action>'");
      int q = intern(state);
      Symbol a = alphabet.require(action);
      if (!a.is_action()) fail(Errc::unknown_symbol, "'" + action + "' is not an action");
      if (t.emit[static_cast<std::size_t>(q)].index != -1) bad("duplicate emit for state " + state);
      t.emit[static_cast<std::size_t>(q)] = a;
    } else if (key == "on:") {
      std::string state, percept, arrow, target, extra;
      if (!(ws >> state >> percept >> arrow >> target) || arrow != "->" || (ws >> extra))
        bad("expected 'on: <state> <percept> -> <state>'");
      int q = intern(state);
      Symbol p = alphabet.require(percept);
      if (!p.is_percept()) fail(Errc::unknown_symbol, "'" + percept + "' is not a percept");
      int to = intern(target);
      int& cell = t.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(p.index)];
      if (cell != -1) bad("duplicate transition for " + state + " on " + percept);
      cell = to;
    } else {
      bad("unknown directive '" + key + "'");
    }
  }
  if (start == -1) fail(Errc::format_error, "missing 'start:' line");
  if (t.num_states() == 0) fail(Errc::format_error, "transducer declares no states");
  t.start = start;
  for (int q = 0; q < t.num_states(); ++q) {
    if (t.emit[static_cast<std::size_t>(q)].index == -1)
      fail(Errc::partial_policy,
           "state '" + t.state_names[static_cast<std::size_t>(q)] + "' has no emitted action");
    for (int p = 0; p < alphabet.num_percepts(); ++p)
      if (t.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] == -1)
        fail(Errc::partial_policy, "state '" + t.state_names[static_cast<std::size_t>(q)] +
                                       "' has no transition on percept '" +
                                       alphabet.name(alphabet.percept(p)) + "'");
  }
  return t;
}

}  // namespace deon
