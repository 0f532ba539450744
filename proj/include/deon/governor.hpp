#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deon/analyzer.hpp"

namespace deon {

enum class GovernorMode { strict, permissive };

/// strict refuses to open unless the empty history is Good (and, with
/// foresight, unless the start state is governable); permissive opens
/// regardless and may refuse proposals later. foresight restricts emitted
/// actions to the governable region W instead of merely strongly safe ones.
struct GovernorConfig {
  GovernorMode mode = GovernorMode::strict;
  bool foresight = false;
  std::optional<std::vector<Symbol>> fallback_order;  // defaults to declaration order
};

enum class ProposalKind { approved, substituted, refused };
enum class RefuseReason { no_safe_action, session_frozen };

inline const char* refuse_reason_name(RefuseReason r) {
  return r == RefuseReason::no_safe_action ? "no-safe-action" : "frozen";
}

struct ProposalOutcome {
  ProposalKind kind;
  Symbol proposed;
  std::optional<Symbol> emitted;       // approved or substituted action
  std::optional<RefuseReason> reason;  // when refused
};

/// The runtime action filter. A session tracks the automaton state of the
/// emitted history and alternates propose/observe; every emitted action is
/// strongly safe (Good for every next percept), so in strict mode the
/// emitted history is in G after every completed cycle.
///
/// Sessions are single-owner sequential objects; distinct sessions are
/// independent.
class GovernorSession {
 public:
  enum class Phase { awaiting_proposal, awaiting_percept };

  /// If the proposed action is safe here it is approved unchanged; otherwise
  /// the first safe action in fallback order is substituted, found by
  /// scanning the action symbols in order. With no safe action the proposal
  /// is refused and the session freezes rather than emit a Bad action.
  ProposalOutcome propose(Symbol action) {
    if (!action.is_action() || !alphabet().contains(action))
      fail(Errc::unknown_symbol, "proposed symbol is not a declared action");
    if (phase_ != Phase::awaiting_proposal)
      fail(Errc::protocol_order, "propose called while awaiting a percept");
    ProposalOutcome outcome{ProposalKind::refused, action, std::nullopt, std::nullopt};
    if (frozen_) {
      outcome.reason = RefuseReason::session_frozen;
    } else if (safe_here(action)) {
      outcome = {ProposalKind::approved, action, action, std::nullopt};
    } else {
      std::optional<Symbol> fallback;
      for (Symbol y : fallback_order_)
        if (safe_here(y)) {
          fallback = y;
          break;
        }
      if (fallback)
        outcome = {ProposalKind::substituted, action, fallback, std::nullopt};
      else
        outcome.reason = RefuseReason::no_safe_action;
    }
    if (outcome.kind == ProposalKind::refused) {
      frozen_ = true;
    } else {
      pending_ = *outcome.emitted;
      phase_ = Phase::awaiting_percept;
    }
    log_.push_back(outcome);
    return outcome;
  }

  ProposalOutcome propose(std::string_view action_name) {
    return propose(alphabet().require(action_name));
  }

  /// Completes the cycle with the environment's percept.
  void observe(Symbol percept) {
    if (!percept.is_percept() || !alphabet().contains(percept))
      fail(Errc::unknown_symbol, "observed symbol is not a declared percept");
    if (phase_ != Phase::awaiting_percept)
      fail(Errc::protocol_order, "observe called without an approved proposal");
    state_ = deontology_.step_cycle(state_, pending_, percept);
    history_ = history_.extended(pending_, percept);
    phase_ = Phase::awaiting_proposal;
  }

  void observe(std::string_view percept_name) { observe(alphabet().require(percept_name)); }

  const Alphabet& alphabet() const { return deontology_.alphabet; }
  const Deontology& deontology() const { return deontology_; }
  const History& emitted_history() const { return history_; }
  const std::vector<ProposalOutcome>& decision_log() const { return log_; }
  Phase phase() const { return phase_; }
  int current_state() const { return state_; }
  bool frozen() const { return frozen_; }
  const GovernorConfig& config() const { return config_; }

  friend GovernorSession open_session(const Deontology& d, const GovernorConfig& cfg);

 private:
  GovernorSession(Deontology d, GovernorConfig cfg, SafeActionTable table,
                  std::optional<GovernableRegion> region, std::vector<Symbol> fallback)
      : deontology_(std::move(d)),
        config_(std::move(cfg)),
        table_(std::move(table)),
        region_(std::move(region)),
        fallback_order_(std::move(fallback)),
        state_(deontology_.dfa.start),
        history_(deontology_.alphabet) {}

  bool safe_here(Symbol action) const {
    if (region_) {
      if (!region_->contains(state_)) return false;
      const auto& ok = region_->preserving.at(state_);
      return std::find(ok.begin(), ok.end(), action) != ok.end();
    }
    const auto& ok = table_.strong(state_);
    return std::find(ok.begin(), ok.end(), action) != ok.end();
  }

  Deontology deontology_;
  GovernorConfig config_;
  SafeActionTable table_;
  std::optional<GovernableRegion> region_;
  std::vector<Symbol> fallback_order_;
  int state_;
  Phase phase_ = Phase::awaiting_proposal;
  Symbol pending_{SymbolKind::action, 0};  // approved action awaiting its percept
  bool frozen_ = false;
  History history_;
  std::vector<ProposalOutcome> log_;
};

/// Opens a governor session on a compiled deontology.
inline GovernorSession open_session(const Deontology& d, const GovernorConfig& cfg = {}) {
  std::vector<Symbol> fallback;
  if (cfg.fallback_order) {
    std::vector<char> seen(static_cast<std::size_t>(d.alphabet.num_actions()), 0);
    for (Symbol y : *cfg.fallback_order) {
      if (!y.is_action() || !d.alphabet.contains(y))
        fail(Errc::unknown_symbol, "fallback order holds a symbol that is not an action");
      if (seen[static_cast<std::size_t>(y.index)]++)
        fail(Errc::duplicate_symbol, "fallback order repeats an action");
    }
    if (static_cast<int>(cfg.fallback_order->size()) != d.alphabet.num_actions())
      fail(Errc::format_error, "fallback order must be a permutation of the action alphabet");
    fallback = *cfg.fallback_order;
  } else {
    for (int a = 0; a < d.alphabet.num_actions(); ++a) fallback.push_back(d.alphabet.action(a));
  }

  if (cfg.mode == GovernorMode::strict && !accepts_empty(d))
    fail(Errc::empty_history_not_good,
         "strict session requires the empty history to be Good");

  std::optional<GovernableRegion> region;
  if (cfg.foresight) {
    region = governable_region(d);
    if (cfg.mode == GovernorMode::strict && !region->contains_start)
      fail(Errc::not_governable, "start state lies outside the governable region");
  }

  return GovernorSession(d, cfg, build_safe_action_table(d), std::move(region),
                         std::move(fallback));
}

/// The emitted history together with the full verdict log.
inline std::pair<History, std::vector<ProposalOutcome>> session_trace(
    const GovernorSession& s) {
  return {s.emitted_history(), s.decision_log()};
}

}  // namespace deon
