#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>

#include "deon/alphabet.hpp"
#include "deon/history.hpp"

using deon::Alphabet;
using deon::Errc;
using deon::History;
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

Alphabet ng_alphabet() { return deon::make_alphabet({"ok", "err"}, {"noop", "move", "grab"}); }

}  // namespace

TEST_CASE("make_alphabet preserves declaration order") {
  Alphabet a = ng_alphabet();
  CHECK(a.num_percepts() == 2);
  CHECK(a.num_actions() == 3);
  CHECK(a.name(a.action(0)) == "noop");
  CHECK(a.name(a.action(2)) == "grab");
  CHECK(a.name(a.percept(1)) == "err");
  CHECK(a.require("move") == a.action(1));
  CHECK(!a.find("fly"));
}

TEST_CASE("make_alphabet rejects duplicates and empty lists") {
  CHECK(thrown_code([] { deon::make_alphabet({"ok"}, {"ok"}); }) == Errc::duplicate_symbol);
  CHECK(thrown_code([] { deon::make_alphabet({"ok", "ok"}, {"noop"}); }) ==
        Errc::duplicate_symbol);
  CHECK(thrown_code([] { deon::make_alphabet({}, {"noop"}); }) == Errc::empty_alphabet);
  CHECK(thrown_code([] { deon::make_alphabet({"ok"}, {}); }) == Errc::empty_alphabet);
}

TEST_CASE("combined symbol ids round-trip") {
  Alphabet a = ng_alphabet();
  for (int i = 0; i < a.num_symbols(); ++i) CHECK(a.id(a.symbol(i)) == i);
  CHECK(a.is_action_id(a.id(a.action(2))));
  CHECK(!a.is_action_id(a.id(a.percept(0))));
}

TEST_CASE("append_cycle extends without mutating") {
  Alphabet a = ng_alphabet();
  History e(a);
  History one = deon::append_cycle(e, a.require("noop"), a.require("ok"));
  CHECK(e.cycles() == 0);
  CHECK(one.cycles() == 1);
  CHECK(deon::render_history(one) == "noop ok");
  History two = deon::append_cycle(one, a.require("move"), a.require("err"));
  CHECK(deon::render_history(two) == "noop ok move err");
  CHECK(deon::render_history(one) == "noop ok");

  // role check: a percept cannot open a cycle
  CHECK(thrown_code([&] { deon::append_cycle(e, a.require("ok"), a.require("ok")); }) ==
        Errc::unknown_symbol);
}

TEST_CASE("parse_history_text") {
  Alphabet a = ng_alphabet();
  History h = deon::parse_history_text("noop ok move err", a);
  CHECK(h.cycles() == 2);
  CHECK(h.action_at(1) == a.require("move"));

  CHECK(deon::parse_history_text("", a).empty());

  CHECK(thrown_code([&] { deon::parse_history_text("ok noop", a); }) ==
        Errc::alternation_violation);
  CHECK(thrown_code([&] { deon::parse_history_text("noop ok move", a); }) ==
        Errc::alternation_violation);
  CHECK(thrown_code([&] { deon::parse_history_text("noop fly", a); }) == Errc::unknown_symbol);
}

TEST_CASE("history text round-trip and parity roles", "[property]") {
  Alphabet a = ng_alphabet();
  std::mt19937_64 rng(20260810);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> act(0, a.num_actions() - 1);
  std::uniform_int_distribution<int> per(0, a.num_percepts() - 1);
  for (int round = 0; round < 200; ++round) {
    History h(a);
    int cycles = len(rng);
    for (int k = 0; k < cycles; ++k)
      h = deon::append_cycle(h, a.action(act(rng)), a.percept(per(rng)));
    CHECK(h.cycles() == cycles);
    CHECK(deon::parse_history_text(deon::render_history(h), a) == h);
    for (std::size_t i = 0; i < h.size(); ++i)
      CHECK(h.tokens()[i].is_action() == (i % 2 == 0));
  }
}
