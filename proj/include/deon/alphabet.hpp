#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "deon/error.hpp"

namespace deon {

enum class SymbolKind { action, percept };

/// A reference to a declared symbol: its role plus its position within the
/// declaration list of that role. Symbols are only meaningful together with
/// the Alphabet that declared them.
struct Symbol {
  SymbolKind kind;
  int index;

  bool is_action() const { return kind == SymbolKind::action; }
  bool is_percept() const { return kind == SymbolKind::percept; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// The I/O vocabulary of an agent: an ordered list of percept names and an
/// ordered list of action names. Declaration order is significant; it is the
/// canonical tie-break order everywhere downstream (fallback search, witness
/// selection, canonical state numbering).
///
/// Immutable after construction; cheap to copy (shared internals).
class Alphabet {
 public:
  Alphabet() = default;

  int num_actions() const { return static_cast<int>(data_->actions.size()); }
  int num_percepts() const { return static_cast<int>(data_->percepts.size()); }
  int num_symbols() const { return num_actions() + num_percepts(); }

  Symbol action(int i) const { return Symbol{SymbolKind::action, i}; }
  Symbol percept(int i) const { return Symbol{SymbolKind::percept, i}; }

  const std::string& name(Symbol s) const {
    return s.is_action() ? data_->actions.at(static_cast<std::size_t>(s.index))
                         : data_->percepts.at(static_cast<std::size_t>(s.index));
  }

  const std::vector<std::string>& action_names() const { return data_->actions; }
  const std::vector<std::string>& percept_names() const { return data_->percepts; }

  std::optional<Symbol> find(std::string_view n) const {
    auto it = data_->by_name.find(std::string(n));
    if (it == data_->by_name.end()) return std::nullopt;
    return it->second;
  }

  /// Like find(), but throws UnknownSymbol.
  Symbol require(std::string_view n) const {
    if (auto s = find(n)) return *s;
    fail(Errc::unknown_symbol, "symbol '" + std::string(n) + "' is not declared");
  }

  /// True when s is a valid reference into this alphabet.
  bool contains(Symbol s) const {
    int limit = s.is_action() ? num_actions() : num_percepts();
    return s.index >= 0 && s.index < limit;
  }

  /// Combined symbol id used to index automaton transition tables:
  /// actions occupy [0, num_actions), percepts follow.
  int id(Symbol s) const { return s.is_action() ? s.index : num_actions() + s.index; }

  Symbol symbol(int combined_id) const {
    if (combined_id < num_actions()) return action(combined_id);
    return percept(combined_id - num_actions());
  }

  bool is_action_id(int combined_id) const { return combined_id < num_actions(); }

  /// Structural equality: same names in the same order and roles.
  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.data_ == b.data_ ||
           (a.data_->actions == b.data_->actions && a.data_->percepts == b.data_->percepts);
  }

  friend Alphabet make_alphabet(const std::vector<std::string>& percept_names,
                                const std::vector<std::string>& action_names);

 private:
  struct Data {
    std::vector<std::string> actions;
    std::vector<std::string> percepts;
    std::unordered_map<std::string, Symbol> by_name;
  };

  std::shared_ptr<const Data> data_ = std::make_shared<Data>();
};

/// Builds an alphabet from the two declaration lists. Rejects empty lists and
/// duplicate names (within a list or across the two lists).
inline Alphabet make_alphabet(const std::vector<std::string>& percept_names,
                              const std::vector<std::string>& action_names) {
  if (percept_names.empty() || action_names.empty())
    fail(Errc::empty_alphabet, "both the percept list and the action list must be non-empty");
  auto data = std::make_shared<Alphabet::Data>();
  data->actions = action_names;
  data->percepts = percept_names;
  for (int i = 0; i < static_cast<int>(action_names.size()); ++i) {
    if (!data->by_name.emplace(action_names[static_cast<std::size_t>(i)],
                               Symbol{SymbolKind::action, i})
             .second)
      fail(Errc::duplicate_symbol, "'" + action_names[static_cast<std::size_t>(i)] +
                                       "' is declared more than once");
  }
  for (int i = 0; i < static_cast<int>(percept_names.size()); ++i) {
    if (!data->by_name.emplace(percept_names[static_cast<std::size_t>(i)],
                               Symbol{SymbolKind::percept, i})
             .second)
      fail(Errc::duplicate_symbol, "'" + percept_names[static_cast<std::size_t>(i)] +
                                       "' is declared more than once");
  }
  Alphabet a;
  a.data_ = std::move(data);
  return a;
}

}  // namespace deon
