#pragma once

#include <stdexcept>
#include <string>

namespace deon {

/// Error codes carried by every deon::Error. Each code corresponds to one
/// contract violation of the public API; the CLI maps them to exit code 2.
enum class Errc {
  duplicate_symbol,
  empty_alphabet,
  unknown_symbol,
  alternation_violation,
  syntax_error,
  undeclared_symbol,
  duplicate_section,
  state_blowup,
  alphabet_mismatch,
  format_error,
  partial_policy,
  empty_history_not_good,
  not_governable,
  protocol_order,
  not_strongly_viable,
  trivial_deontology,
  mapping_incomplete,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::duplicate_symbol: return "DuplicateSymbol";
    case Errc::empty_alphabet: return "EmptyAlphabet";
    case Errc::unknown_symbol: return "UnknownSymbol";
    case Errc::alternation_violation: return "AlternationViolation";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::undeclared_symbol: return "UndeclaredSymbol";
    case Errc::duplicate_section: return "DuplicateSection";
    case Errc::state_blowup: return "StateBlowup";
    case Errc::alphabet_mismatch: return "AlphabetMismatch";
    case Errc::format_error: return "FormatError";
    case Errc::partial_policy: return "PartialPolicy";
    case Errc::empty_history_not_good: return "EmptyHistoryNotGood";
    case Errc::not_governable: return "NotGovernable";
    case Errc::protocol_order: return "ProtocolOrder";
    case Errc::not_strongly_viable: return "NotStronglyViable";
    case Errc::trivial_deontology: return "TrivialDeontology";
    case Errc::mapping_incomplete: return "MappingIncomplete";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace deon
