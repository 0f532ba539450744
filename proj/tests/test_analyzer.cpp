#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "deon/analyzer.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using deon::Deontology;
using deon::HistoryClass;
using deon::SpecDoc;
using deon::Symbol;
using deon::Triviality;

namespace {

Deontology make(const char* text) { return deon::compile(deon::parse_spec(text)); }

// All interleaved token strings of at most max_cycles cycles.
void enumerate_histories(const deon::Alphabet& a, int max_cycles,
                         std::vector<std::vector<Symbol>>& out) {
  out.push_back({});
  std::size_t level_begin = 0;
  for (int k = 1; k <= max_cycles; ++k) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (int ai = 0; ai < a.num_actions(); ++ai)
        for (int pi = 0; pi < a.num_percepts(); ++pi) {
          std::vector<Symbol> h = out[i];
          h.push_back(a.action(ai));
          h.push_back(a.percept(pi));
          out.push_back(std::move(h));
        }
    level_begin = level_end;
  }
}

int run_tokens(const Deontology& d, const std::vector<Symbol>& tokens) {
  int q = d.dfa.start;
  for (Symbol s : tokens) q = d.step(q, s);
  return q;
}

}  // namespace

TEST_CASE("good_reachable_states against brute-force walks") {
  for (const char* text : {fixtures::kNoGrab, fixtures::kGuess}) {
    Deontology d = make(text);
    std::vector<int> got = deon::good_reachable_states(d);
    CHECK(got.size() == 1);  // single accepting state in both fixtures

    std::set<int> brute;
    std::vector<std::vector<Symbol>> histories;
    enumerate_histories(d.alphabet, 4, histories);
    for (const auto& h : histories) {
      int q = run_tokens(d, h);
      if (d.dfa.accepting[static_cast<std::size_t>(q)]) brute.insert(q);
    }
    CHECK(std::set<int>(got.begin(), got.end()) == brute);
  }

  Deontology eps = make("percepts: ok\nactions: noop\ngood: eps\n");
  CHECK(deon::good_reachable_states(eps) == std::vector<int>{eps.dfa.start});
}

TEST_CASE("check_trivial") {
  CHECK(deon::check_trivial(make("percepts: ok err\nactions: noop move grab\ngood: %\n")) ==
        Triviality::full_g);
  CHECK(deon::check_trivial(
            make("percepts: ok err\nactions: noop move grab\ngood: (grab grab)\n")) ==
        Triviality::empty_g);
  Deontology ng = make(fixtures::kNoGrab);
  CHECK(deon::check_trivial(ng) == Triviality::non_trivial);

  // brute force: a non-trivial language has members and interleaved non-members
  std::vector<std::vector<Symbol>> histories;
  enumerate_histories(ng.alphabet, 3, histories);
  bool member = false, non_member = false;
  for (const auto& h : histories) {
    if (ng.dfa.accepting[static_cast<std::size_t>(run_tokens(ng, h))])
      member = true;
    else
      non_member = true;
  }
  CHECK(member);
  CHECK(non_member);
}

TEST_CASE("viability of the fixtures") {
  SECTION("no-grab: strongly viable") {
    deon::ViabilityReport v = deon::check_viability(make(fixtures::kNoGrab));
    CHECK(v.weak);
    CHECK(v.strong);
  }
  SECTION("guess: weakly but not strongly viable") {
    Deontology d = make(fixtures::kGuess);
    deon::ViabilityReport v = deon::check_viability(d);
    CHECK(v.weak);
    CHECK(!v.strong);
    REQUIRE(v.strong_witness.has_value());
    CHECK(*v.strong_witness == d.dfa.start);  // the lone Good state
  }
  SECTION("one-shot spec fails requirement 1") {
    deon::ViabilityReport v =
        deon::check_viability(make("percepts: ok err\nactions: noop move grab\ngood: (noop ok)\n"));
    CHECK(!v.weak);
    CHECK(!v.strong);
    CHECK(!v.weak_witness.has_value());
  }
}

TEST_CASE("weak viability against a brute-force quantifier check") {
  // over every Good history of <= 3 cycles: for every percept, some action
  // keeps the extension Good
  Deontology d = make(fixtures::kNoGrab);
  std::vector<std::vector<Symbol>> histories;
  enumerate_histories(d.alphabet, 3, histories);
  for (const auto& h : histories) {
    int q = run_tokens(d, h);
    if (!d.dfa.accepting[static_cast<std::size_t>(q)]) continue;
    for (int pi = 0; pi < d.alphabet.num_percepts(); ++pi) {
      bool saved = false;
      for (int ai = 0; ai < d.alphabet.num_actions() && !saved; ++ai)
        saved = d.dfa.accepting[static_cast<std::size_t>(
                    d.step_cycle(q, d.alphabet.action(ai), d.alphabet.percept(pi)))] != 0;
      CHECK(saved);
    }
  }
}

TEST_CASE("consequence independence") {
  CHECK(deon::check_consequence_independence(make(fixtures::kNoGrab)).independent);

  Deontology gamble = make(fixtures::kGamble);
  deon::CiReport g = deon::check_consequence_independence(gamble);
  CHECK(!g.independent);
  REQUIRE(g.witness.has_value());
  CHECK(g.witness->state == gamble.dfa.start);
  CHECK(gamble.alphabet.name(g.witness->action) == "bet");
  CHECK(gamble.alphabet.name(g.witness->percept_a) == "win");
  CHECK(gamble.alphabet.name(g.witness->percept_b) == "lose");

  Deontology guess = make(fixtures::kGuess);
  deon::CiReport q = deon::check_consequence_independence(guess);
  CHECK(!q.independent);
  REQUIRE(q.witness.has_value());
  CHECK(q.witness->state == guess.dfa.start);
  CHECK(guess.alphabet.name(q.witness->action) == "a");
  CHECK(guess.alphabet.name(q.witness->percept_a) == "pa");
  CHECK(guess.alphabet.name(q.witness->percept_b) == "pb");
}

TEST_CASE("governable region") {
  Deontology ng = make(fixtures::kNoGrab);
  deon::GovernableRegion w = deon::governable_region(ng);
  CHECK(w.states == std::vector<int>{ng.dfa.start});
  CHECK(w.contains_start);
  REQUIRE(w.preserving.count(ng.dfa.start));
  CHECK(ng.alphabet.name(w.preserving.at(ng.dfa.start).front()) == "noop");

  deon::GovernableRegion guess = deon::governable_region(make(fixtures::kGuess));
  CHECK(guess.states.empty());
  CHECK(!guess.contains_start);

  Deontology hom = make(fixtures::kHom);
  deon::GovernableRegion wh = deon::governable_region(hom);
  CHECK(wh.states == std::vector<int>{hom.dfa.start});
  REQUIRE(wh.preserving.count(hom.dfa.start));
  CHECK(hom.alphabet.name(wh.preserving.at(hom.dfa.start).front()) == "G");
}

TEST_CASE("governable region is a fixpoint") {
  for (const auto& [name, text] : fixtures::all()) {
    INFO("fixture " << name);
    Deontology d = make(text);
    deon::GovernableRegion w = deon::governable_region(d);
    std::set<int> in_w(w.states.begin(), w.states.end());
    for (int q : w.states) {
      // some action keeps every percept inside W
      bool preserved = false;
      for (int ai = 0; ai < d.alphabet.num_actions() && !preserved; ++ai) {
        bool all = true;
        for (int pi = 0; pi < d.alphabet.num_percepts() && all; ++pi)
          all = in_w.count(d.step_cycle(q, d.alphabet.action(ai), d.alphabet.percept(pi))) > 0;
        preserved = all;
      }
      CHECK(preserved);
      CHECK(!w.preserving.at(q).empty());
    }
  }
}

TEST_CASE("classify_history") {
  Deontology ng = make(fixtures::kNoGrab);
  CHECK(deon::classify_history(ng, deon::parse_history_text("grab ok", ng.alphabet)) ==
        HistoryClass::dead);
  CHECK(deon::classify_history(ng, deon::parse_history_text("noop ok", ng.alphabet)) ==
        HistoryClass::good);

  Deontology debt = make(fixtures::kDebt);
  deon::History borrowed = deon::parse_history_text("borrow tick", debt.alphabet);
  CHECK(deon::classify_history(debt, borrowed) == HistoryClass::amendable);
  // the witness continuation lands back in G
  deon::History amended = deon::parse_history_text("borrow tick repay tick", debt.alphabet);
  CHECK(deon::classify_history(debt, amended) == HistoryClass::good);
}

TEST_CASE("a dead history never recovers", "[property]") {
  std::mt19937_64 rng(555);
  Deontology ng = make(fixtures::kNoGrab);
  std::uniform_int_distribution<int> act(0, ng.alphabet.num_actions() - 1);
  std::uniform_int_distribution<int> per(0, ng.alphabet.num_percepts() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    deon::History h = deon::parse_history_text("grab ok", ng.alphabet);
    REQUIRE(deon::classify_history(ng, h) == HistoryClass::dead);
    for (int k = 0; k < 8; ++k) {
      h = h.extended(ng.alphabet.action(act(rng)), ng.alphabet.percept(per(rng)));
      CHECK(deon::classify_history(ng, h) == HistoryClass::dead);
    }
  }
}

TEST_CASE("implication chain over random deontologies", "[property]") {
  std::mt19937_64 rng(20260801);
  int kept = 0, ci_count = 0, dependent_count = 0;
  while (kept < 60) {
    SpecDoc doc = oracle::random_spec(rng, kept % 2 == 0);
    Deontology d;
    try {
      d = deon::compile(doc);
    } catch (const deon::Error&) {
      continue;  // state cap; skip
    }
    if (d.dfa.num_states > 20) continue;
    ++kept;
    deon::AnalysisReport r = deon::analyze(d);
    if (r.strong_viable) CHECK(r.weak_viable);
    if (r.consequence_independent) {
      ++ci_count;
      CHECK(r.weak_viable == r.strong_viable);
    } else {
      ++dependent_count;
    }
  }
  // the sample must exercise both sides
  CHECK(ci_count >= 10);
  CHECK(dependent_count >= 10);
}

TEST_CASE("analyze aggregates the verdicts") {
  deon::AnalysisReport r = deon::analyze(make(fixtures::kGuess));
  CHECK(r.triviality == Triviality::non_trivial);
  CHECK(r.accepts_empty);
  CHECK(r.weak_viable);
  CHECK(!r.strong_viable);
  CHECK(!r.consequence_independent);
  CHECK(r.governable_region_size == 0);
  CHECK(!r.governable_from_start);
}
