#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "deon/alphabet.hpp"

namespace deon {

/// An interaction record: action, percept, action, percept, ... Each
/// (action, percept) pair is one cycle; the empty history is a valid value.
/// Token roles are fixed by position parity: even positions are actions,
/// odd positions are percepts.
///
/// Histories are immutable values; extension returns a new history.
class History {
 public:
  explicit History(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  History(Alphabet alphabet, std::vector<Symbol> tokens)
      : alphabet_(std::move(alphabet)), tokens_(std::move(tokens)) {
    validate();
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Symbol>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  int cycles() const { return static_cast<int>(tokens_.size() / 2); }
  bool empty() const { return tokens_.empty(); }

  /// 0-based cycle accessors.
  Symbol action_at(int cycle) const { return tokens_.at(static_cast<std::size_t>(2 * cycle)); }
  Symbol percept_at(int cycle) const {
    return tokens_.at(static_cast<std::size_t>(2 * cycle + 1));
  }

  History extended(Symbol action, Symbol percept) const {
    check_cycle(action, percept);
    History h(*this);
    h.tokens_.push_back(action);
    h.tokens_.push_back(percept);
    return h;
  }

  friend bool operator==(const History& a, const History& b) {
    return a.alphabet_ == b.alphabet_ && a.tokens_ == b.tokens_;
  }

 private:
  void check_cycle(Symbol action, Symbol percept) const {
    if (!action.is_action() || !alphabet_.contains(action))
      fail(Errc::unknown_symbol, "cycle must start with a declared action");
    if (!percept.is_percept() || !alphabet_.contains(percept))
      fail(Errc::unknown_symbol, "cycle must end with a declared percept");
  }

  void validate() const {
    if (tokens_.size() % 2 != 0)
      fail(Errc::alternation_violation, "history must have an even number of tokens");
    for (std::size_t i = 0; i < tokens_.size(); i += 2)
      check_cycle(tokens_[i], tokens_[i + 1]);
  }

  Alphabet alphabet_;
  std::vector<Symbol> tokens_;
};

inline History append_cycle(const History& h, Symbol action, Symbol percept) {
  return h.extended(action, percept);
}

/// Canonical text form: token names separated by single spaces, no trailing
/// whitespace; the empty string denotes the empty history.
inline std::string render_history(const History& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += ' ';
    out += h.alphabet().name(h.tokens()[i]);
  }
  return out;
}

/// Parses whitespace-separated token names. Tokens must alternate
/// action/percept starting with an action and the count must be even.
inline History parse_history_text(std::string_view text, const Alphabet& alphabet) {
  std::istringstream in{std::string(text)};
  std::vector<Symbol> tokens;
  std::string word;
  while (in >> word) {
    Symbol s = alphabet.require(word);
    bool expect_action = tokens.size() % 2 == 0;
    if (expect_action != s.is_action())
      fail(Errc::alternation_violation,
           "token '" + word + "' at position " + std::to_string(tokens.size()) + " must be " +
               (expect_action ? "an action" : "a percept"));
    tokens.push_back(s);
  }
  if (tokens.size() % 2 != 0)
    fail(Errc::alternation_violation, "history ends mid-cycle (odd token count)");
  return History(alphabet, std::move(tokens));
}

}  // namespace deon
