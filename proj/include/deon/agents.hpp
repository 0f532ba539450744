#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deon/analyzer.hpp"
#include "deon/rng.hpp"

namespace deon {

/// A policy maps the history so far to the next action. Implementations are
/// deterministic given (history, seed); instances may hold precomputed state
/// and are single-owner objects.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Symbol next_action(const History& h) = 0;
  virtual std::string name() const = 0;
  virtual std::optional<std::uint64_t> seed() const { return std::nullopt; }
  /// Finite-state form for the verifier, when one exists. The induced
  /// transducer replays the policy's own choices; it agrees with the policy
  /// on every history the policy itself can produce.
  virtual std::optional<PolicyTransducer> as_transducer() const { return std::nullopt; }
};

/// An environment maps the history so far plus the just-emitted action to
/// the next percept. Deterministic given (inputs, seed).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual Symbol next_percept(const History& h, Symbol action) = 0;
  virtual std::string name() const = 0;
  virtual std::optional<std::uint64_t> seed() const { return std::nullopt; }
};

namespace detail {

constexpr std::uint64_t kPolicyStream = 0x706f6c696379ULL;
constexpr std::uint64_t kEnvStream = 0x656e76ULL;

class NullPolicy final : public Policy {
 public:
  NullPolicy(Alphabet alphabet, Symbol noop) : alphabet_(std::move(alphabet)), noop_(noop) {}
  Symbol next_action(const History&) override { return noop_; }
  std::string name() const override { return "null"; }
  std::optional<PolicyTransducer> as_transducer() const override {
    PolicyTransducer t;
    t.alphabet = alphabet_;
    t.start = 0;
    t.emit = {noop_};
    t.next = {std::vector<int>(static_cast<std::size_t>(alphabet_.num_percepts()), 0)};
    t.state_names = {"s0"};
    return t;
  }

 private:
  Alphabet alphabet_;
  Symbol noop_;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(Alphabet alphabet, std::uint64_t seed)
      : alphabet_(std::move(alphabet)), seed_(seed) {}
  Symbol next_action(const History& h) override {
    return alphabet_.action(bounded_draw(seed_ ^ kPolicyStream,
                                         static_cast<std::uint64_t>(h.cycles()),
                                         alphabet_.num_actions()));
  }
  std::string name() const override { return "random"; }
  std::optional<std::uint64_t> seed() const override { return seed_; }

 private:
  Alphabet alphabet_;
  std::uint64_t seed_;
};

class RandomEnv final : public Environment {
 public:
  RandomEnv(Alphabet alphabet, std::uint64_t seed)
      : alphabet_(std::move(alphabet)), seed_(seed) {}
  Symbol next_percept(const History& h, Symbol) override {
    return alphabet_.percept(bounded_draw(seed_ ^ kEnvStream,
                                          static_cast<std::uint64_t>(h.cycles()),
                                          alphabet_.num_percepts()));
  }
  std::string name() const override { return "random"; }
  std::optional<std::uint64_t> seed() const override { return seed_; }

 private:
  Alphabet alphabet_;
  std::uint64_t seed_;
};

// The always-Good witness policy: at a Good history, the first action in
// declaration order that keeps the history Good for every next percept; at a
// non-Good history any action serves, so the first declared one is used.
class GoodPolicy final : public Policy {
 public:
  explicit GoodPolicy(Deontology d) : deontology_(std::move(d)) {
    table_ = build_safe_action_table(deontology_);
    for (int q : good_reachable_states(deontology_))
      if (table_.strong(q).empty())
        fail(Errc::not_strongly_viable,
             "no strongly safe action at Good-reachable state " + std::to_string(q));
  }

  Symbol next_action(const History& h) override {
    if (!(h.alphabet() == deontology_.alphabet))
      fail(Errc::alphabet_mismatch, "history alphabet differs from the deontology's");
    int q = deontology_.dfa.start;
    for (Symbol s : h.tokens()) q = deontology_.step(q, s);
    if (deontology_.dfa.accepting[static_cast<std::size_t>(q)]) return table_.strong(q).front();
    return deontology_.alphabet.action(0);
  }

  std::string name() const override { return "good"; }

  std::optional<PolicyTransducer> as_transducer() const override {
    // Transducer states mirror the boundary states the policy can reach;
    // strong safety keeps the exploration inside the accepting set.
    PolicyTransducer t;
    t.alphabet = deontology_.alphabet;
    std::unordered_map<int, int> ids;
    std::vector<int> order;
    auto intern = [&](int q) {
      auto [it, inserted] = ids.emplace(q, static_cast<int>(order.size()));
      if (inserted) order.push_back(q);
      return it->second;
    };
    t.start = intern(deontology_.dfa.start);
    for (std::size_t i = 0; i < order.size(); ++i) {
      int q = order[i];
      Symbol y = deontology_.dfa.accepting[static_cast<std::size_t>(q)]
                     ? table_.strong(q).front()
                     : deontology_.alphabet.action(0);
      t.emit.push_back(y);
      t.state_names.push_back("q" + std::to_string(q));
      std::vector<int> row;
      for (int p = 0; p < deontology_.alphabet.num_percepts(); ++p)
        row.push_back(intern(deontology_.step_cycle(q, y, deontology_.alphabet.percept(p))));
      t.next.push_back(std::move(row));
    }
    return t;
  }

 private:
  Deontology deontology_;
  SafeActionTable table_;
};

// The violating witness policy: it walks a shortest all-Good route to a Good
// history that admits a Bad extension, then plays the violating action. Off
// the scripted route it plays the first declared action.
class BadPolicy final : public Policy {
 public:
  explicit BadPolicy(Deontology d) : deontology_(std::move(d)) {
    if (check_trivial(deontology_) != Triviality::non_trivial)
      fail(Errc::trivial_deontology, "a trivial deontology admits no violating witness");
    if (!accepts_empty(deontology_))
      fail(Errc::empty_history_not_good,
           "the scripted route starts from the Good empty history");
    plan_route();
  }

  Symbol next_action(const History& h) override {
    if (!(h.alphabet() == deontology_.alphabet))
      fail(Errc::alphabet_mismatch, "history alphabet differs from the deontology's");
    if (on_script(h)) {
      int k = h.cycles();
      if (k < static_cast<int>(route_.size())) return route_[static_cast<std::size_t>(k)].action;
      if (k == static_cast<int>(route_.size())) return violating_action_;
    }
    return deontology_.alphabet.action(0);
  }

  std::string name() const override { return "bad"; }

  std::optional<PolicyTransducer> as_transducer() const override {
    const Alphabet& a = deontology_.alphabet;
    PolicyTransducer t;
    t.alphabet = a;
    t.start = 0;
    int len = static_cast<int>(route_.size());
    int divergent = len + 1;
    for (int i = 0; i <= divergent; ++i) {
      Symbol y = i < len          ? route_[static_cast<std::size_t>(i)].action
                 : i == len       ? violating_action_
                                  : a.action(0);
      t.emit.push_back(y);
      t.state_names.push_back(i == divergent ? "off" : "s" + std::to_string(i));
      std::vector<int> row(static_cast<std::size_t>(a.num_percepts()), divergent);
      if (i < len) row[static_cast<std::size_t>(route_[static_cast<std::size_t>(i)].percept.index)] = i + 1;
      t.next.push_back(std::move(row));
    }
    return t;
  }

  /// The scripted route: cycles of the shortest all-Good history that admits
  /// a violation, then the action that violates it.
  const std::vector<std::pair<Symbol, Symbol>>& scripted_cycles() const { return cycles_view_; }
  Symbol violating_action() const { return violating_action_; }
  Symbol violating_percept() const { return violating_percept_; }
  /// 1-based cycle at which the violation lands.
  int violation_cycle() const { return static_cast<int>(route_.size()) + 1; }

 private:
  struct Leg {
    Symbol action;
    Symbol percept;
  };

  // BFS through accepting states only: reached states correspond to
  // histories whose every even prefix is Good, which is exactly the space
  // the verifier explores.
  void plan_route() {
    const Alphabet& a = deontology_.alphabet;
    const int n = deontology_.dfa.num_states;
    std::vector<int> parent(static_cast<std::size_t>(n), -2);
    std::vector<Leg> via(static_cast<std::size_t>(n), Leg{a.action(0), a.percept(0)});
    std::deque<int> queue;
    parent[static_cast<std::size_t>(deontology_.dfa.start)] = -1;
    queue.push_back(deontology_.dfa.start);
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (int ai = 0; ai < a.num_actions(); ++ai) {
        int mid = deontology_.step(q, a.action(ai));
        for (int pi = 0; pi < a.num_percepts(); ++pi) {
          int to = deontology_.step(mid, a.percept(pi));
          if (!deontology_.dfa.accepting[static_cast<std::size_t>(to)]) {
            // violation available at q
            violating_action_ = a.action(ai);
            violating_percept_ = a.percept(pi);
            int cur = q;
            while (parent[static_cast<std::size_t>(cur)] != -1) {
              route_.push_back(via[static_cast<std::size_t>(cur)]);
              cur = parent[static_cast<std::size_t>(cur)];
            }
            std::reverse(route_.begin(), route_.end());
            for (const Leg& leg : route_) cycles_view_.emplace_back(leg.action, leg.percept);
            return;
          }
          if (parent[static_cast<std::size_t>(to)] == -2) {
            parent[static_cast<std::size_t>(to)] = q;
            via[static_cast<std::size_t>(to)] = Leg{a.action(ai), a.percept(pi)};
            queue.push_back(to);
          }
        }
      }
    }
    // a non-trivial deontology always has a Bad extension somewhere in the
    // Good-closed region, or it would accept the whole interleaving
    throw std::logic_error("bad_policy: no violation found in a non-trivial deontology");
  }

  bool on_script(const History& h) const {
    if (h.cycles() > static_cast<int>(route_.size())) return false;
    for (int k = 0; k < h.cycles(); ++k)
      if (h.action_at(k) != route_[static_cast<std::size_t>(k)].action ||
          h.percept_at(k) != route_[static_cast<std::size_t>(k)].percept)
        return false;
    return true;
  }

  Deontology deontology_;
  std::vector<Leg> route_;
  std::vector<std::pair<Symbol, Symbol>> cycles_view_;
  Symbol violating_action_{SymbolKind::action, 0};
  Symbol violating_percept_{SymbolKind::percept, 0};
};

class TransducerPolicy final : public Policy {
 public:
  explicit TransducerPolicy(PolicyTransducer t) : transducer_(std::move(t)) {}
  Symbol next_action(const History& h) override {
    if (!(h.alphabet() == transducer_.alphabet))
      fail(Errc::alphabet_mismatch, "history alphabet differs from the transducer's");
    int q = transducer_.start;
    for (int k = 0; k < h.cycles(); ++k) q = transducer_.step(q, h.percept_at(k));
    return transducer_.emit[static_cast<std::size_t>(q)];
  }
  std::string name() const override { return "transducer"; }
  std::optional<PolicyTransducer> as_transducer() const override { return transducer_; }

 private:
  PolicyTransducer transducer_;
};

class ScriptedEnv final : public Environment {
 public:
  ScriptedEnv(Alphabet alphabet, std::vector<Symbol> script)
      : alphabet_(std::move(alphabet)), script_(std::move(script)) {
    if (script_.empty()) fail(Errc::format_error, "percept script must not be empty");
    for (Symbol s : script_)
      if (!s.is_percept() || !alphabet_.contains(s))
        fail(Errc::unknown_symbol, "script entries must be declared percepts");
  }
  Symbol next_percept(const History& h, Symbol) override {
    std::size_t k = static_cast<std::size_t>(h.cycles());
    return script_[std::min(k, script_.size() - 1)];
  }
  std::string name() const override { return "scripted"; }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> script_;
};

// Picks the percept that leaves the agent the fewest options: immediate
// non-Good successors first, then the smallest strongly-safe set, ties by
// declaration order.
class AdversarialEnv final : public Environment {
 public:
  explicit AdversarialEnv(Deontology d)
      : deontology_(std::move(d)), table_(build_safe_action_table(deontology_)) {}

  Symbol next_percept(const History& h, Symbol action) override {
    if (!(h.alphabet() == deontology_.alphabet))
      fail(Errc::alphabet_mismatch, "history alphabet differs from the deontology's");
    int q = deontology_.dfa.start;
    for (Symbol s : h.tokens()) q = deontology_.step(q, s);
    int mid = deontology_.step(q, action);
    const Alphabet& a = deontology_.alphabet;
    Symbol best = a.percept(0);
    auto score = [&](Symbol p) {
      int to = deontology_.step(mid, p);
      int good = deontology_.dfa.accepting[static_cast<std::size_t>(to)] ? 1 : 0;
      return std::pair<int, int>(good, static_cast<int>(table_.strong(to).size()));
    };
    auto best_score = score(best);
    for (int pi = 1; pi < a.num_percepts(); ++pi) {
      Symbol p = a.percept(pi);
      auto s = score(p);
      if (s < best_score) {
        best = p;
        best_score = s;
      }
    }
    return best;
  }

  std::string name() const override { return "adversarial"; }

 private:
  Deontology deontology_;
  SafeActionTable table_;
};

}  // namespace detail

/// An agent that outputs the designated no-op action forever.
inline std::unique_ptr<Policy> null_policy(const Alphabet& alphabet, std::string_view noop) {
  Symbol s = alphabet.require(noop);
  if (!s.is_action()) fail(Errc::unknown_symbol, "'" + std::string(noop) + "' is not an action");
  return std::make_unique<detail::NullPolicy>(alphabet, s);
}

/// Uniform seeded action source; identical seeds reproduce identical streams.
inline std::unique_ptr<Policy> random_policy(const Alphabet& alphabet, std::uint64_t seed) {
  return std::make_unique<detail::RandomPolicy>(alphabet, seed);
}

inline std::unique_ptr<Environment> random_env(const Alphabet& alphabet, std::uint64_t seed) {
  return std::make_unique<detail::RandomEnv>(alphabet, seed);
}

/// The always-Good policy. Requires a strongly safe action at every
/// Good-reachable state (NotStronglyViable otherwise).
inline std::unique_ptr<Policy> good_policy(const Deontology& d) {
  return std::make_unique<detail::GoodPolicy>(d);
}

/// A policy built to violate the deontology at the earliest opportunity.
/// Requires a non-trivial deontology that accepts the empty history.
inline std::unique_ptr<Policy> bad_policy(const Deontology& d) {
  return std::make_unique<detail::BadPolicy>(d);
}

inline std::unique_ptr<Policy> transducer_policy(PolicyTransducer t) {
  return std::make_unique<detail::TransducerPolicy>(std::move(t));
}

inline std::unique_ptr<Environment> scripted_env(const Alphabet& alphabet,
                                                 std::vector<Symbol> script) {
  return std::make_unique<detail::ScriptedEnv>(alphabet, std::move(script));
}

/// The hostile side of the universal percept quantifier.
inline std::unique_ptr<Environment> adversarial_env(const Deontology& d) {
  return std::make_unique<detail::AdversarialEnv>(d);
}

}  // namespace deon
