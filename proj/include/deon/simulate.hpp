#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deon/agents.hpp"
#include "deon/governor.hpp"

namespace deon {

/// Everything needed to reproduce and audit one simulation run. Prefix
/// classifications come from the analyzer, not from simulator bookkeeping.
struct RunRecord {
  std::string spec_identity;  // caller-supplied label (file name, fixture name)
  std::string spec_hash;
  std::string policy_name;
  std::optional<std::uint64_t> policy_seed;
  std::string env_name;
  std::optional<std::uint64_t> env_seed;
  bool governed = false;
  GovernorConfig config;
  int cycles = 0;  // requested; the history may be shorter if refused
  History history;
  std::vector<ProposalOutcome> verdicts;       // per cycle when governed
  std::vector<HistoryClass> prefix_classes;    // per completed cycle
  std::optional<int> first_violation_cycle;    // 1-based

  explicit RunRecord(Alphabet alphabet) : history(std::move(alphabet)) {}
};

/// Runs the agent cycle loop: the policy proposes from the history, the
/// governor (when enabled) filters, the environment supplies the percept.
/// Identical inputs and seeds give identical records. A refused proposal in
/// governed mode ends the run early; nothing unsafe is ever emitted.
inline RunRecord simulate(const Deontology& d, Policy& policy, Environment& env, int cycles,
                          bool governed, const GovernorConfig& cfg = {},
                          std::string spec_identity = "") {
  RunRecord record(d.alphabet);
  record.spec_identity = std::move(spec_identity);
  record.spec_hash = spec_hash(d);
  record.policy_name = policy.name();
  record.policy_seed = policy.seed();
  record.env_name = env.name();
  record.env_seed = env.seed();
  record.governed = governed;
  record.config = cfg;
  record.cycles = cycles;

  std::optional<GovernorSession> session;
  if (governed) session.emplace(open_session(d, cfg));

  for (int k = 0; k < cycles; ++k) {
    Symbol action = policy.next_action(record.history);
    if (governed) {
      ProposalOutcome outcome = session->propose(action);
      record.verdicts.push_back(outcome);
      if (outcome.kind == ProposalKind::refused) break;
      action = *outcome.emitted;
    }
    Symbol percept = env.next_percept(record.history, action);
    if (governed) session->observe(percept);
    record.history = record.history.extended(action, percept);
    HistoryClass cls = classify_history(d, record.history);
    record.prefix_classes.push_back(cls);
    if (cls != HistoryClass::good && !record.first_violation_cycle)
      record.first_violation_cycle = k + 1;
  }
  return record;
}

/// Classifies every even prefix of a history in one streaming pass over the
/// automaton; agrees with cycle-by-cycle classify_history.
inline std::vector<HistoryClass> check_run(const Deontology& d, const History& h) {
  if (!(h.alphabet() == d.alphabet))
    fail(Errc::alphabet_mismatch, "history alphabet differs from the deontology's");
  std::vector<HistoryClass> out;
  out.reserve(static_cast<std::size_t>(h.cycles()));
  int q = d.dfa.start;
  for (int k = 0; k < h.cycles(); ++k) {
    q = d.step_cycle(q, h.action_at(k), h.percept_at(k));
    if (d.dfa.accepting[static_cast<std::size_t>(q)])
      out.push_back(HistoryClass::good);
    else
      out.push_back(q == d.dead_state ? HistoryClass::dead : HistoryClass::amendable);
  }
  return out;
}

}  // namespace deon
