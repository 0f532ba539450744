#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "deon/regex.hpp"

namespace deon {

/// A parsed specification document: the declared alphabet plus the
/// good-language expression, before compilation to an automaton.
struct SpecDoc {
  Alphabet alphabet;
  RegexPtr good;
};

namespace detail {

inline bool valid_symbol_name(std::string_view n) {
  if (n.empty() || !is_name_start(n[0])) return false;
  for (char c : n)
    if (!is_name_char(c)) return false;
  return n != "eps";
}

struct SpecSection {
  std::string value;
  int line = 0;
  int value_column = 0;  // 0-based offset of value within the line
};

}  // namespace detail

/// Parses the `.deon` spec format: three `key: value` sections (percepts,
/// actions, good), `#` comments, blank lines allowed. Sections may appear in
/// any order but each exactly once.
inline SpecDoc parse_spec(std::string_view text) {
  std::optional<detail::SpecSection> percepts, actions, good;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t colon = line.find(':', begin);
    if (colon == std::string::npos)
      fail(Errc::syntax_error, "line " + std::to_string(line_no) + ": expected 'key: value'");
    std::string key = line.substr(begin, colon - begin);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::size_t vbegin = line.find_first_not_of(" \t", colon + 1);
    std::string value = vbegin == std::string::npos ? "" : line.substr(vbegin);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t' || value.back() == '\r'))
      value.pop_back();
    detail::SpecSection section{value, line_no,
                                static_cast<int>(vbegin == std::string::npos ? line.size() : vbegin)};

    std::optional<detail::SpecSection>* slot = nullptr;
    if (key == "percepts")
      slot = &percepts;
    else if (key == "actions")
      slot = &actions;
    else if (key == "good")
      slot = &good;
    else
      fail(Errc::syntax_error,
           "line " + std::to_string(line_no) + ": unknown section '" + key + "'");
    if (slot->has_value())
      fail(Errc::duplicate_section,
           "section '" + key + "' appears again at line " + std::to_string(line_no));
    *slot = std::move(section);
  }
  if (!percepts) fail(Errc::syntax_error, "missing 'percepts:' section");
  if (!actions) fail(Errc::syntax_error, "missing 'actions:' section");
  if (!good) fail(Errc::syntax_error, "missing 'good:' section");

  auto split_names = [](const detail::SpecSection& s, const char* what) {
    std::istringstream ws(s.value);
    std::vector<std::string> names;
    std::string n;
    while (ws >> n) {
      if (!detail::valid_symbol_name(n))
        fail(Errc::syntax_error, "line " + std::to_string(s.line) + ": '" + n +
                                     "' is not a valid " + what + " name");
      names.push_back(n);
    }
    return names;
  };

  SpecDoc doc;
  doc.alphabet = make_alphabet(split_names(*percepts, "percept"), split_names(*actions, "action"));
  doc.good = parse_regex(good->value, doc.alphabet, good->line, good->value_column);
  return doc;
}

}  // namespace deon
