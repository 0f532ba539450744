#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>

#include "deon/automaton.hpp"
#include "deon/spec.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using deon::Deontology;
using deon::Errc;
using deon::SpecDoc;
using deon::Symbol;

namespace {

template <class F>
std::optional<Errc> thrown_code(F&& f) {
  try {
    f();
  } catch (const deon::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

deon::History to_history(const deon::Alphabet& a, const std::vector<Symbol>& tokens) {
  return deon::History(a, tokens);
}

}  // namespace

TEST_CASE("parse_spec reads the three sections") {
  SpecDoc doc = deon::parse_spec(fixtures::kNoGrab);
  CHECK(doc.alphabet.num_percepts() == 2);
  CHECK(doc.alphabet.num_actions() == 3);
  CHECK(doc.good->kind == deon::Regex::Kind::star);
}

TEST_CASE("parse_spec error paths") {
  CHECK(thrown_code([] {
          deon::parse_spec("percepts: ok\nactions: noop\ngood: (noop ok\n");
        }) == Errc::syntax_error);
  CHECK(thrown_code([] { deon::parse_spec("percepts: ok\nactions: noop\ngood: fly\n"); }) ==
        Errc::undeclared_symbol);
  CHECK(thrown_code([] {
          deon::parse_spec("percepts: ok\npercepts: ok\nactions: noop\ngood: eps\n");
        }) == Errc::duplicate_section);
  CHECK(thrown_code([] { deon::parse_spec("percepts: ok\ngood: eps\n"); }) == Errc::syntax_error);
  CHECK(thrown_code([] { deon::parse_spec("percepts: ok\nactions: noop\ngood: noop |\n"); }) ==
        Errc::syntax_error);
  CHECK(thrown_code([] { deon::parse_spec("percepts: ok\nactions: noop\ngood: [noop\n"); }) ==
        Errc::syntax_error);
  CHECK(thrown_code([] { deon::parse_spec("percepts: ok\nactions: noop\ngood: _x\n"); }) ==
        Errc::syntax_error);
  CHECK(thrown_code([] { deon::parse_spec("percepts: ok\nactions: noop\ngood: eps)\n"); }) ==
        Errc::syntax_error);
  // comments and blank lines are fine
  CHECK_NOTHROW(deon::parse_spec("# spec\npercepts: ok\n\nactions: noop # trailing\ngood: %\n"));
}

TEST_CASE("compiled state counts match the brute-force partition") {
  SpecDoc ng = deon::parse_spec(fixtures::kNoGrab);
  Deontology dng = deon::compile(ng);
  CHECK(dng.dfa.num_states == 3);
  CHECK(oracle::nerode_class_count(ng, 4, 4) == 3);

  SpecDoc guess = deon::parse_spec(fixtures::kGuess);
  Deontology dguess = deon::compile(guess);
  CHECK(dguess.dfa.num_states == 4);
  CHECK(oracle::nerode_class_count(guess, 4, 4) == 4);
}

TEST_CASE("good: eps accepts exactly the empty history") {
  Deontology d = deon::compile(deon::parse_spec("percepts: ok\nactions: noop\ngood: eps\n"));
  CHECK(deon::accepts_empty(d));
  CHECK(deon::membership(d, deon::History(d.alphabet)));
  CHECK(!deon::membership(d, deon::parse_history_text("noop ok", d.alphabet)));
  CHECK(d.dfa.num_states == 2);  // the accepting start and the dead state
}

TEST_CASE("accepts_empty mirrors nullability") {
  CHECK(deon::accepts_empty(deon::compile(deon::parse_spec(fixtures::kNoGrab))));
  CHECK(!deon::accepts_empty(
      deon::compile(deon::parse_spec("percepts: ok\nactions: noop\ngood: (noop ok)\n"))));
}

TEST_CASE("membership examples") {
  Deontology rs = deon::compile(deon::parse_spec(fixtures::kRedStop));
  CHECK(deon::membership(rs, deon::parse_history_text("go red stop green", rs.alphabet)));
  CHECK(!deon::membership(rs, deon::parse_history_text("go red go green", rs.alphabet)));
  Deontology ng = deon::compile(deon::parse_spec(fixtures::kNoGrab));
  CHECK(deon::membership(ng, deon::History(ng.alphabet)));

  Deontology guess = deon::compile(deon::parse_spec(fixtures::kGuess));
  CHECK(thrown_code([&] { deon::membership(guess, deon::History(ng.alphabet)); }) ==
        Errc::alphabet_mismatch);
}

TEST_CASE("automaton membership equals the derivative oracle", "[property]") {
  std::mt19937_64 rng(96111);
  for (const auto& [name, text] : fixtures::all()) {
    INFO("fixture " << name);
    SpecDoc doc = deon::parse_spec(text);
    Deontology d = deon::compile(doc);
    for (int i = 0; i < 1000; ++i) {
      std::vector<Symbol> w = oracle::random_token_string(rng, doc.alphabet, 16);
      bool expect = oracle::member(doc, w);
      int q = d.dfa.start;
      for (Symbol s : w) q = d.step(q, s);
      bool got = d.dfa.accepting[static_cast<std::size_t>(q)] != 0;
      if (got != expect) {
        std::string ws;
        for (Symbol s : w) ws += doc.alphabet.name(s) + " ";
        FAIL("disagreement on: " << ws);
      }
    }
  }
}

TEST_CASE("re-minimizing changes nothing") {
  for (const auto& [name, text] : fixtures::all()) {
    INFO("fixture " << name);
    Deontology d = deon::compile(deon::parse_spec(text));
    deon::Dfa again = deon::detail::minimize_dfa(d.dfa);
    CHECK(again.num_states == d.dfa.num_states);
    CHECK(oracle::moore_class_count(d.dfa) == d.dfa.num_states);
  }
}

TEST_CASE("pipeline fuzz: random specs agree with the derivative oracle", "[property]") {
  std::mt19937_64 rng(0xF022);
  int kept = 0;
  while (kept < 50) {
    SpecDoc doc = oracle::random_spec(rng, kept % 2 == 0);
    Deontology d;
    try {
      d = deon::compile(doc);
    } catch (const deon::Error&) {
      continue;
    }
    ++kept;
    INFO("sample " << kept << " with " << d.dfa.num_states << " states");
    // the independent refinement agrees that the automaton is minimal
    CHECK(oracle::moore_class_count(d.dfa) == d.dfa.num_states);
    for (int i = 0; i < 200; ++i) {
      std::vector<Symbol> w = oracle::random_token_string(rng, doc.alphabet, 12);
      int q = d.dfa.start;
      for (Symbol s : w) q = d.step(q, s);
      bool got = d.dfa.accepting[static_cast<std::size_t>(q)] != 0;
      REQUIRE(got == oracle::member(doc, w));
    }
    // dumps of random automata round-trip exactly
    CHECK(deon::dump_automaton(deon::load_automaton(deon::dump_automaton(d))) ==
          deon::dump_automaton(d));
  }
}

TEST_CASE("accepted prefixes along random walks are interleaved", "[property]") {
  std::mt19937_64 rng(4242);
  for (const auto& [name, text] : fixtures::all()) {
    SpecDoc doc = deon::parse_spec(text);
    Deontology d = deon::compile(doc);
    std::uniform_int_distribution<int> sym(0, doc.alphabet.num_symbols() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      int q = d.dfa.start;
      std::vector<Symbol> w;
      for (int step = 0; step < 20; ++step) {
        Symbol s = doc.alphabet.symbol(sym(rng));
        w.push_back(s);
        q = d.step(q, s);
        if (d.dfa.accepting[static_cast<std::size_t>(q)]) CHECK(oracle::interleaved(w));
      }
    }
  }
}

TEST_CASE("dump/load round trip") {
  for (const auto& [name, text] : fixtures::all()) {
    INFO("fixture " << name);
    Deontology d = deon::compile(deon::parse_spec(text));
    std::string dumped = deon::dump_automaton(d);
    Deontology loaded = deon::load_automaton(dumped);
    CHECK(deon::dump_automaton(loaded) == dumped);
    CHECK(deon::spec_hash(loaded) == deon::spec_hash(d));
  }
}

TEST_CASE("round-tripped automaton agrees on random strings", "[property]") {
  SpecDoc doc = deon::parse_spec(fixtures::kGuess);
  Deontology d = deon::compile(doc);
  Deontology loaded = deon::load_automaton(deon::dump_automaton(d));
  std::mt19937_64 rng(777);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Symbol> w = oracle::random_token_string(rng, doc.alphabet, 16);
    if (!oracle::interleaved(w)) continue;
    deon::History h = to_history(doc.alphabet, w);
    CHECK(deon::membership(d, h) == deon::membership(loaded, h));
  }
}

TEST_CASE("load rejects malformed dumps") {
  Deontology d = deon::compile(deon::parse_spec(fixtures::kNoGrab));
  std::string dumped = deon::dump_automaton(d);

  CHECK(thrown_code([&] { deon::load_automaton(dumped.substr(0, dumped.size() / 2)); }) ==
        Errc::format_error);
  CHECK(thrown_code([] { deon::load_automaton("not a dump\n"); }) == Errc::format_error);
  CHECK(thrown_code([&] { deon::load_automaton(dumped + "0 noop 1\n"); }) == Errc::format_error);

  // an automaton accepting non-interleaved sequences is rejected
  std::string bad =
      "deon-dfa v1\n"
      "percepts: ok\n"
      "actions: noop\n"
      "states: 1\n"
      "start: 0\n"
      "accept: 0\n"
      "parity: b\n"
      "0 noop 0\n"
      "0 ok 0\n";
  CHECK(thrown_code([&] { deon::load_automaton(bad); }) == Errc::format_error);
}

TEST_CASE("warning when the expression strays outside the interleaving") {
  Deontology warned =
      deon::compile(deon::parse_spec("percepts: ok\nactions: noop\ngood: ok | (noop ok)\n"));
  REQUIRE(warned.warnings.size() == 1);

  Deontology clean = deon::compile(deon::parse_spec(fixtures::kNoGrab));
  CHECK(clean.warnings.empty());
}

TEST_CASE("state cap triggers StateBlowup") {
  CHECK(thrown_code([] {
          deon::CompileOptions opts;
          opts.state_cap = 2;
          deon::compile(deon::parse_spec(fixtures::kRedStop), opts);
        }) == Errc::state_blowup);
}

TEST_CASE("wildcards") {
  // % covers every interleaved history
  Deontology all = deon::compile(deon::parse_spec("percepts: ok err\nactions: noop\ngood: %\n"));
  CHECK(deon::membership(all, deon::parse_history_text("noop ok noop err noop ok", all.alphabet)));
  CHECK(deon::accepts_empty(all));

  // _c is exactly one cycle
  Deontology one = deon::compile(deon::parse_spec("percepts: ok err\nactions: noop\ngood: _c\n"));
  CHECK(!deon::accepts_empty(one));
  CHECK(deon::membership(one, deon::parse_history_text("noop err", one.alphabet)));
  CHECK(!deon::membership(one, deon::parse_history_text("noop err noop ok", one.alphabet)));
}
