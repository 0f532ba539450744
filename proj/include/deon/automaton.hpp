#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "deon/history.hpp"
#include "deon/spec.hpp"

namespace deon {

/// Complete deterministic automaton over the combined symbol ids of an
/// alphabet (actions first, then percepts).
struct Dfa {
  int num_states = 0;
  int num_symbols = 0;
  int start = 0;
  std::vector<char> accepting;  // per state
  std::vector<int> next;        // row-major [state][symbol]

  int step(int q, int sym) const {
    return next[static_cast<std::size_t>(q) * static_cast<std::size_t>(num_symbols) +
                static_cast<std::size_t>(sym)];
  }
  int& at(int q, int sym) {
    return next[static_cast<std::size_t>(q) * static_cast<std::size_t>(num_symbols) +
                static_cast<std::size_t>(sym)];
  }
};

/// Token-count parity of a state: boundary states sit between cycles (an
/// even number of tokens read), mid states sit between an action and its
/// percept. The unique dead state is marked boundary by convention.
enum class Parity : char { boundary, mid };

/// A compiled deontology: the minimized complete automaton for
/// L(good) ∩ (action · percept)*, together with its alphabet. Construct via
/// compile() or load_automaton(); the fields are not meant to be edited.
///
/// Structural guarantees: all states reachable; exactly one state (the dead
/// state) has an empty future language; every accepting state has boundary
/// parity. Immutable in practice and safe to share across threads.
struct Deontology {
  Alphabet alphabet;
  Dfa dfa;
  std::vector<Parity> parity;
  int dead_state = -1;
  std::vector<std::string> warnings;  // compile-time diagnostics, not semantics

  int step(int q, Symbol s) const { return dfa.step(q, alphabet.id(s)); }
  /// State after one full cycle (action then percept) from boundary state q.
  int step_cycle(int q, Symbol a, Symbol p) const { return step(step(q, a), p); }
};

struct CompileOptions {
  std::size_t state_cap = 100000;  // determinized-state limit before StateBlowup
};

// ---------------------------------------------------------------------------
// construction pipeline
// ---------------------------------------------------------------------------

namespace detail {

struct Nfa {
  struct Edge {
    int symbol;
    int to;
  };
  std::vector<std::vector<Edge>> edges;
  std::vector<std::vector<int>> eps;
  int start = 0;
  int accept = 0;

  int add_state() {
    edges.emplace_back();
    eps.emplace_back();
    return static_cast<int>(edges.size()) - 1;
  }
};

// Thompson construction; every sub-expression gets a fresh (in, out) pair.
inline std::pair<int, int> thompson(Nfa& nfa, const RegexPtr& re, const Alphabet& alphabet) {
  int in = nfa.add_state();
  int out = nfa.add_state();
  switch (re->kind) {
    case Regex::Kind::epsilon:
      nfa.eps[static_cast<std::size_t>(in)].push_back(out);
      break;
    case Regex::Kind::symbols:
      for (Symbol s : re->symbols)
        nfa.edges[static_cast<std::size_t>(in)].push_back({alphabet.id(s), out});
      break;
    case Regex::Kind::cat: {
      auto [lin, lout] = thompson(nfa, re->lhs, alphabet);
      auto [rin, rout] = thompson(nfa, re->rhs, alphabet);
      nfa.eps[static_cast<std::size_t>(in)].push_back(lin);
      nfa.eps[static_cast<std::size_t>(lout)].push_back(rin);
      nfa.eps[static_cast<std::size_t>(rout)].push_back(out);
      break;
    }
    case Regex::Kind::alt: {
      auto [lin, lout] = thompson(nfa, re->lhs, alphabet);
      auto [rin, rout] = thompson(nfa, re->rhs, alphabet);
      nfa.eps[static_cast<std::size_t>(in)].push_back(lin);
      nfa.eps[static_cast<std::size_t>(in)].push_back(rin);
      nfa.eps[static_cast<std::size_t>(lout)].push_back(out);
      nfa.eps[static_cast<std::size_t>(rout)].push_back(out);
      break;
    }
    case Regex::Kind::star: {
      auto [bin, bout] = thompson(nfa, re->lhs, alphabet);
      nfa.eps[static_cast<std::size_t>(in)].push_back(bin);
      nfa.eps[static_cast<std::size_t>(in)].push_back(out);
      nfa.eps[static_cast<std::size_t>(bout)].push_back(bin);
      nfa.eps[static_cast<std::size_t>(bout)].push_back(out);
      break;
    }
  }
  return {in, out};
}

inline Nfa build_nfa(const RegexPtr& re, const Alphabet& alphabet) {
  Nfa nfa;
  auto [in, out] = thompson(nfa, re, alphabet);
  nfa.start = in;
  nfa.accept = out;
  return nfa;
}

inline void eps_close(const Nfa& nfa, std::vector<int>& set) {
  std::vector<int> stack(set);
  std::vector<char> seen(nfa.edges.size(), 0);
  for (int s : set) seen[static_cast<std::size_t>(s)] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : nfa.eps[static_cast<std::size_t>(s)]) {
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = 1;
        set.push_back(t);
        stack.push_back(t);
      }
    }
  }
  std::sort(set.begin(), set.end());
}

// Subset construction. The empty subset doubles as the dead sink, so the
// result is always complete.
inline Dfa determinize(const Nfa& nfa, int num_symbols, std::size_t state_cap) {
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> set) {
    auto [it, inserted] = ids.emplace(std::move(set), static_cast<int>(subsets.size()));
    if (inserted) {
      subsets.push_back(it->first);
      if (subsets.size() > state_cap)
        fail(Errc::state_blowup, "determinization exceeded the state cap of " +
                                     std::to_string(state_cap) + " states");
    }
    return it->second;
  };

  std::vector<int> start_set{nfa.start};
  eps_close(nfa, start_set);
  int start = intern(std::move(start_set));

  Dfa dfa;
  dfa.num_symbols = num_symbols;
  dfa.start = start;
  for (std::size_t qi = 0; qi < subsets.size(); ++qi) {
    for (int c = 0; c < num_symbols; ++c) {
      std::vector<int> move;
      for (int s : subsets[qi])
        for (const auto& e : nfa.edges[static_cast<std::size_t>(s)])
          if (e.symbol == c) move.push_back(e.to);
      std::sort(move.begin(), move.end());
      move.erase(std::unique(move.begin(), move.end()), move.end());
      eps_close(nfa, move);
      dfa.next.push_back(intern(std::move(move)));
    }
  }
  dfa.num_states = static_cast<int>(subsets.size());
  dfa.accepting.assign(static_cast<std::size_t>(dfa.num_states), 0);
  for (int q = 0; q < dfa.num_states; ++q)
    dfa.accepting[static_cast<std::size_t>(q)] =
        std::binary_search(subsets[static_cast<std::size_t>(q)].begin(),
                           subsets[static_cast<std::size_t>(q)].end(), nfa.accept)
            ? 1
            : 0;
  return dfa;
}

// Product with the 3-phase alternation tracker (boundary / mid / broken).
// Acceptance requires landing on a cycle boundary; `outside_interleaving` is
// set when the raw regex accepts a string the intersection discards.
inline Dfa parity_product(const Dfa& in, int num_actions, bool* outside_interleaving) {
  enum { B = 0, M = 1, X = 2 };
  auto phase_step = [&](int phase, int symbol) {
    bool action = symbol < num_actions;
    if (phase == B) return action ? M : X;
    if (phase == M) return action ? X : B;
    return X;
  };

  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int q, int phase) {
    auto [it, inserted] = ids.emplace(std::make_pair(q, phase), static_cast<int>(states.size()));
    if (inserted) states.emplace_back(q, phase);
    return it->second;
  };

  Dfa out;
  out.num_symbols = in.num_symbols;
  out.start = intern(in.start, B);
  if (outside_interleaving) *outside_interleaving = false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [q, phase] = states[i];
    if (outside_interleaving && in.accepting[static_cast<std::size_t>(q)] && phase != B)
      *outside_interleaving = true;
    for (int c = 0; c < in.num_symbols; ++c)
      out.next.push_back(intern(in.step(q, c), phase_step(phase, c)));
  }
  out.num_states = static_cast<int>(states.size());
  out.accepting.assign(static_cast<std::size_t>(out.num_states), 0);
  for (int i = 0; i < out.num_states; ++i)
    out.accepting[static_cast<std::size_t>(i)] =
        (in.accepting[static_cast<std::size_t>(states[static_cast<std::size_t>(i)].first)] &&
         states[static_cast<std::size_t>(i)].second == B)
            ? 1
            : 0;
  return out;
}

// Hopcroft partition refinement. Expects a complete DFA whose states are all
// reachable; returns the language-minimal quotient.
inline Dfa minimize_dfa(const Dfa& in) {
  const int n = in.num_states;
  const int k = in.num_symbols;

  std::vector<std::vector<std::vector<int>>> inv(
      static_cast<std::size_t>(k),
      std::vector<std::vector<int>>(static_cast<std::size_t>(n)));
  for (int q = 0; q < n; ++q)
    for (int c = 0; c < k; ++c)
      inv[static_cast<std::size_t>(c)][static_cast<std::size_t>(in.step(q, c))].push_back(q);

  std::vector<int> class_of(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> classes;
  {
    std::vector<int> acc, rej;
    for (int q = 0; q < n; ++q) (in.accepting[static_cast<std::size_t>(q)] ? acc : rej).push_back(q);
    for (auto& group : {rej, acc}) {
      if (group.empty()) continue;
      for (int q : group) class_of[static_cast<std::size_t>(q)] = static_cast<int>(classes.size());
      classes.push_back(group);
    }
  }

  // Both initial classes go on the worklist; starting from just one of them
  // is the classic incomplete-splitting trap.
  std::deque<int> work;
  std::vector<char> queued;
  for (int i = 0; i < static_cast<int>(classes.size()); ++i) {
    work.push_back(i);
    queued.push_back(1);
  }

  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  int generation = 0;

  while (!work.empty()) {
    int a = work.front();
    work.pop_front();
    queued[static_cast<std::size_t>(a)] = 0;
    std::vector<int> splitter = classes[static_cast<std::size_t>(a)];  // snapshot

    for (int c = 0; c < k; ++c) {
      std::vector<int> x;
      for (int s : splitter) {
        const auto& preds = inv[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)];
        x.insert(x.end(), preds.begin(), preds.end());
      }
      if (x.empty()) continue;

      std::unordered_map<int, std::vector<int>> by_class;
      for (int s : x) by_class[class_of[static_cast<std::size_t>(s)]].push_back(s);

      for (auto& [y, xs] : by_class) {
        auto& members = classes[static_cast<std::size_t>(y)];
        if (xs.size() == members.size()) continue;  // Y subset of X: no split

        ++generation;
        for (int s : xs) mark[static_cast<std::size_t>(s)] = generation;
        std::vector<int> rest;
        rest.reserve(members.size() - xs.size());
        for (int s : members)
          if (mark[static_cast<std::size_t>(s)] != generation) rest.push_back(s);

        int z = static_cast<int>(classes.size());
        members = std::move(rest);
        for (int s : xs) class_of[static_cast<std::size_t>(s)] = z;
        classes.push_back(std::move(xs));
        queued.push_back(0);

        if (queued[static_cast<std::size_t>(y)]) {
          work.push_back(z);
          queued[static_cast<std::size_t>(z)] = 1;
        } else if (classes[static_cast<std::size_t>(z)].size() <
                   classes[static_cast<std::size_t>(y)].size()) {
          work.push_back(z);
          queued[static_cast<std::size_t>(z)] = 1;
        } else {
          work.push_back(y);
          queued[static_cast<std::size_t>(y)] = 1;
        }
      }
    }
  }

  Dfa out;
  out.num_symbols = k;
  out.num_states = static_cast<int>(classes.size());
  out.start = class_of[static_cast<std::size_t>(in.start)];
  out.accepting.assign(static_cast<std::size_t>(out.num_states), 0);
  out.next.assign(static_cast<std::size_t>(out.num_states) * static_cast<std::size_t>(k), -1);
  for (int y = 0; y < out.num_states; ++y) {
    int rep = classes[static_cast<std::size_t>(y)].front();
    out.accepting[static_cast<std::size_t>(y)] = in.accepting[static_cast<std::size_t>(rep)];
    for (int c = 0; c < k; ++c)
      out.at(y, c) = class_of[static_cast<std::size_t>(in.step(rep, c))];
  }
  return out;
}

// Stable state numbering: breadth-first from the start state in combined
// symbol id order. Makes dumps and witness ids reproducible.
inline Dfa canonical_renumber(const Dfa& in) {
  std::vector<int> newid(static_cast<std::size_t>(in.num_states), -1);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(in.num_states));
  newid[static_cast<std::size_t>(in.start)] = 0;
  order.push_back(in.start);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c = 0; c < in.num_symbols; ++c) {
      int t = in.step(order[i], c);
      if (newid[static_cast<std::size_t>(t)] == -1) {
        newid[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  if (static_cast<int>(order.size()) != in.num_states)
    throw std::logic_error("canonical_renumber: unreachable state survived minimization");

  Dfa out;
  out.num_symbols = in.num_symbols;
  out.num_states = in.num_states;
  out.start = 0;
  out.accepting.assign(static_cast<std::size_t>(in.num_states), 0);
  out.next.assign(in.next.size(), -1);
  for (int q = 0; q < in.num_states; ++q) {
    int nq = newid[static_cast<std::size_t>(q)];
    out.accepting[static_cast<std::size_t>(nq)] = in.accepting[static_cast<std::size_t>(q)];
    for (int c = 0; c < in.num_symbols; ++c)
      out.at(nq, c) = newid[static_cast<std::size_t>(in.step(q, c))];
  }
  return out;
}

// States reachable along properly alternating input, split by token-count
// parity: first the boundary-phase set, then the mid-phase set.
inline std::pair<std::vector<char>, std::vector<char>> phase_reach(const Dfa& dfa,
                                                                   int num_actions) {
  const int n = dfa.num_states;
  std::vector<char> at_boundary(static_cast<std::size_t>(n), 0);
  std::vector<char> at_mid(static_cast<std::size_t>(n), 0);
  std::deque<std::pair<int, int>> queue;
  at_boundary[static_cast<std::size_t>(dfa.start)] = 1;
  queue.emplace_back(dfa.start, 0);
  while (!queue.empty()) {
    auto [q, phase] = queue.front();
    queue.pop_front();
    int from = phase == 0 ? 0 : num_actions;
    int to = phase == 0 ? num_actions : dfa.num_symbols;
    for (int c = from; c < to; ++c) {
      int t = dfa.step(q, c);
      int tp = 1 - phase;
      auto& mark = tp == 0 ? at_boundary : at_mid;
      if (!mark[static_cast<std::size_t>(t)]) {
        mark[static_cast<std::size_t>(t)] = 1;
        queue.emplace_back(t, tp);
      }
    }
  }
  return {std::move(at_boundary), std::move(at_mid)};
}

// Dead-state identification and parity assignment; validates the structural
// invariants that every consumer of a Deontology relies on.
inline void finalize(Deontology& d, bool strict_structure) {
  const Dfa& dfa = d.dfa;
  const int n = dfa.num_states;
  const int num_actions = d.alphabet.num_actions();

  // co-reachability of the accepting set
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q)
    for (int c = 0; c < dfa.num_symbols; ++c) preds[static_cast<std::size_t>(dfa.step(q, c))].push_back(q);
  std::vector<char> live(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  for (int q = 0; q < n; ++q)
    if (dfa.accepting[static_cast<std::size_t>(q)]) {
      live[static_cast<std::size_t>(q)] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : preds[static_cast<std::size_t>(q)])
      if (!live[static_cast<std::size_t>(p)]) {
        live[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
  }
  std::vector<int> dead;
  for (int q = 0; q < n; ++q)
    if (!live[static_cast<std::size_t>(q)]) dead.push_back(q);
  if (dead.empty()) {
    // every language within the interleaving strands percept-first input, so
    // an all-live automaton must accept something outside it
    if (strict_structure) throw std::logic_error("finalize: automaton has no dead state");
    fail(Errc::format_error, "automaton accepts sequences outside the interleaving");
  }
  if (dead.size() != 1) {
    if (strict_structure)
      throw std::logic_error("finalize: dead states were not merged");
    fail(Errc::format_error, "automaton has more than one dead state (not minimized)");
  }
  d.dead_state = dead.front();

  // parity by phase-tracked reachability along proper alternation
  auto [boundary_reach, mid_reach] = phase_reach(dfa, num_actions);

  d.parity.assign(static_cast<std::size_t>(n), Parity::boundary);
  for (int q = 0; q < n; ++q) {
    if (q == d.dead_state) continue;  // boundary by convention
    bool at_b = boundary_reach[static_cast<std::size_t>(q)] != 0;
    bool at_m = mid_reach[static_cast<std::size_t>(q)] != 0;
    if (at_b == at_m) {
      const char* msg = at_b ? "live state reachable at both parities"
                             : "live state unreachable by alternating input";
      if (strict_structure) throw std::logic_error(std::string("finalize: ") + msg);
      fail(Errc::format_error, std::string(msg) + " (language not within the interleaving)");
    }
    d.parity[static_cast<std::size_t>(q)] = at_b ? Parity::boundary : Parity::mid;
    if (dfa.accepting[static_cast<std::size_t>(q)] && at_m) {
      if (strict_structure) throw std::logic_error("finalize: accepting state with mid parity");
      fail(Errc::format_error, "automaton accepts sequences outside the interleaving");
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Compiles a parsed spec down to its minimized automaton. The accepted
/// language is L(good) ∩ (action · percept)*; a warning (not an error) is
/// recorded when the raw expression matches sequences the intersection
/// discards.
inline Deontology compile(const SpecDoc& doc, const CompileOptions& opts = {}) {
  detail::Nfa nfa = detail::build_nfa(doc.good, doc.alphabet);
  Dfa det = detail::determinize(nfa, doc.alphabet.num_symbols(), opts.state_cap);
  bool outside = false;
  Dfa product = detail::parity_product(det, doc.alphabet.num_actions(), &outside);
  Dfa minimal = detail::canonical_renumber(detail::minimize_dfa(product));

  Deontology d;
  d.alphabet = doc.alphabet;
  d.dfa = std::move(minimal);
  if (outside)
    d.warnings.push_back(
        "good-language expression matches sequences outside the action-percept "
        "interleaving; they are discarded");
  detail::finalize(d, /*strict_structure=*/true);
  return d;
}

/// Decides h ∈ G.
inline bool membership(const Deontology& d, const History& h) {
  if (!(h.alphabet() == d.alphabet))
    fail(Errc::alphabet_mismatch, "history alphabet differs from the deontology's");
  int q = d.dfa.start;
  for (Symbol s : h.tokens()) q = d.step(q, s);
  return d.dfa.accepting[static_cast<std::size_t>(q)] != 0;
}

/// Decides (e, e) ∈ G, the first viability requirement.
inline bool accepts_empty(const Deontology& d) {
  return d.dfa.accepting[static_cast<std::size_t>(d.dfa.start)] != 0;
}

/// Serializes the automaton in the `deon-dfa v1` text format.
inline std::string dump_automaton(const Deontology& d) {
  std::ostringstream out;
  out << "deon-dfa v1\n";
  out << "percepts:";
  for (const auto& n : d.alphabet.percept_names()) out << ' ' << n;
  out << "\nactions:";
  for (const auto& n : d.alphabet.action_names()) out << ' ' << n;
  out << "\nstates: " << d.dfa.num_states << "\n";
  out << "start: " << d.dfa.start << "\n";
  out << "accept:";
  for (int q = 0; q < d.dfa.num_states; ++q)
    if (d.dfa.accepting[static_cast<std::size_t>(q)]) out << ' ' << q;
  out << "\nparity:";
  for (int q = 0; q < d.dfa.num_states; ++q)
    out << ' ' << (d.parity[static_cast<std::size_t>(q)] == Parity::boundary ? 'b' : 'm');
  out << "\n";
  for (int q = 0; q < d.dfa.num_states; ++q)
    for (int c = 0; c < d.dfa.num_symbols; ++c)
      out << q << ' ' << d.alphabet.name(d.alphabet.symbol(c)) << ' ' << d.dfa.step(q, c) << "\n";
  return out.str();
}

/// Parses a `deon-dfa v1` dump. The automaton is re-minimized on load, so
/// the result carries the same structural guarantees as compile() output;
/// load(dump(d)) reproduces d exactly.
inline Deontology load_automaton(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return;
    }
    fail(Errc::format_error, std::string("unexpected end of input, expected ") + what);
  };
  auto expect_key = [&](const char* key) {
    std::string prefix = std::string(key) + ":";
    if (line.rfind(prefix, 0) != 0)
      fail(Errc::format_error, "expected '" + prefix + " ...', got '" + line + "'");
    return line.substr(prefix.size());
  };

  next_line("header");
  if (line != "deon-dfa v1") fail(Errc::format_error, "missing 'deon-dfa v1' header");

  auto words = [](const std::string& s) {
    std::istringstream ws(s);
    std::vector<std::string> out;
    std::string w;
    while (ws >> w) out.push_back(w);
    return out;
  };

  next_line("percepts");
  std::vector<std::string> percepts = words(expect_key("percepts"));
  next_line("actions");
  std::vector<std::string> actions = words(expect_key("actions"));
  Alphabet alphabet;
  try {
    alphabet = make_alphabet(percepts, actions);
  } catch (const Error& e) {
    fail(Errc::format_error, std::string("bad alphabet: ") + e.what());
  }

  auto parse_int = [](const std::string& w, const char* what) {
    try {
      std::size_t used = 0;
      int v = std::stoi(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      fail(Errc::format_error, std::string("bad ") + what + " '" + w + "'");
    }
  };

  next_line("states");
  auto state_words = words(expect_key("states"));
  if (state_words.size() != 1) fail(Errc::format_error, "states line must hold one count");
  int num_states = parse_int(state_words[0], "state count");
  if (num_states <= 0) fail(Errc::format_error, "state count must be positive");

  next_line("start");
  auto start_words = words(expect_key("start"));
  if (start_words.size() != 1) fail(Errc::format_error, "start line must hold one state");
  int start = parse_int(start_words[0], "start state");

  next_line("accept");
  std::vector<char> accepting(static_cast<std::size_t>(num_states), 0);
  for (const auto& w : words(expect_key("accept"))) {
    int q = parse_int(w, "accepting state");
    if (q < 0 || q >= num_states) fail(Errc::format_error, "accepting state out of range");
    accepting[static_cast<std::size_t>(q)] = 1;
  }

  next_line("parity");
  auto parity_words = words(expect_key("parity"));
  if (static_cast<int>(parity_words.size()) != num_states)
    fail(Errc::format_error, "parity line must mark every state");
  for (const auto& w : parity_words)
    if (w != "b" && w != "m") fail(Errc::format_error, "parity markers must be 'b' or 'm'");

  if (start < 0 || start >= num_states) fail(Errc::format_error, "start state out of range");

  Dfa dfa;
  dfa.num_states = num_states;
  dfa.num_symbols = alphabet.num_symbols();
  dfa.start = start;
  dfa.accepting = std::move(accepting);
  dfa.next.assign(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(dfa.num_symbols),
                  -1);
  std::size_t expected = static_cast<std::size_t>(num_states) *
                         static_cast<std::size_t>(dfa.num_symbols);
  for (std::size_t i = 0; i < expected; ++i) {
    next_line("transition");
    auto w = words(line);
    if (w.size() != 3) fail(Errc::format_error, "transition line must be '<from> <symbol> <to>'");
    int from = parse_int(w[0], "transition source");
    int to = parse_int(w[2], "transition target");
    if (from < 0 || from >= num_states || to < 0 || to >= num_states)
      fail(Errc::format_error, "transition state out of range");
    auto sym = alphabet.find(w[1]);
    if (!sym) fail(Errc::format_error, "transition symbol '" + w[1] + "' is not declared");
    int& cell = dfa.at(from, alphabet.id(*sym));
    if (cell != -1) fail(Errc::format_error, "duplicate transition for state " + w[0] + " on " + w[1]);
    cell = to;
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      fail(Errc::format_error, "unexpected trailing content: '" + line + "'");

  // Trim unreachable states, then re-minimize so the structural invariants
  // hold even for hand-written files.
  {
    std::vector<int> reach{dfa.start};
    std::vector<char> seen(static_cast<std::size_t>(num_states), 0);
    seen[static_cast<std::size_t>(dfa.start)] = 1;
    for (std::size_t i = 0; i < reach.size(); ++i)
      for (int c = 0; c < dfa.num_symbols; ++c) {
        int t = dfa.step(reach[i], c);
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = 1;
          reach.push_back(t);
        }
      }
    if (static_cast<int>(reach.size()) != num_states) {
      std::vector<int> newid(static_cast<std::size_t>(num_states), -1);
      for (std::size_t i = 0; i < reach.size(); ++i)
        newid[static_cast<std::size_t>(reach[i])] = static_cast<int>(i);
      Dfa trimmed;
      trimmed.num_states = static_cast<int>(reach.size());
      trimmed.num_symbols = dfa.num_symbols;
      trimmed.start = 0;
      trimmed.accepting.assign(reach.size(), 0);
      trimmed.next.assign(reach.size() * static_cast<std::size_t>(dfa.num_symbols), -1);
      for (std::size_t i = 0; i < reach.size(); ++i) {
        trimmed.accepting[i] = dfa.accepting[static_cast<std::size_t>(reach[i])];
        for (int c = 0; c < dfa.num_symbols; ++c)
          trimmed.at(static_cast<int>(i), c) = newid[static_cast<std::size_t>(dfa.step(reach[i], c))];
      }
      dfa = std::move(trimmed);
    }
  }

  Deontology d;
  d.alphabet = alphabet;
  d.dfa = detail::canonical_renumber(detail::minimize_dfa(dfa));
  detail::finalize(d, /*strict_structure=*/false);
  return d;
}

/// FNV-1a hash of the canonical dump; identifies a compiled deontology.
inline std::string spec_hash(const Deontology& d) {
  std::string text = dump_automaton(d);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace deon
