#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deon/alphabet.hpp"

namespace deon {

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

/// Regular-expression syntax tree over alphabet symbols. `symbols` nodes
/// carry a class of symbols (a single name, `[...]`, or a wildcard expanded
/// at parse time); `+` and `?` are desugared by the parser, so the core has
/// only four operator shapes.
struct Regex {
  enum class Kind { epsilon, symbols, cat, alt, star };

  Kind kind;
  std::vector<Symbol> symbols;  // kind == symbols
  RegexPtr lhs, rhs;            // cat/alt; star uses lhs only
};

inline RegexPtr re_epsilon() {
  static const RegexPtr eps = std::make_shared<Regex>(Regex{Regex::Kind::epsilon, {}, {}, {}});
  return eps;
}
inline RegexPtr re_symbols(std::vector<Symbol> syms) {
  return std::make_shared<Regex>(Regex{Regex::Kind::symbols, std::move(syms), {}, {}});
}
inline RegexPtr re_cat(RegexPtr a, RegexPtr b) {
  return std::make_shared<Regex>(Regex{Regex::Kind::cat, {}, std::move(a), std::move(b)});
}
inline RegexPtr re_alt(RegexPtr a, RegexPtr b) {
  return std::make_shared<Regex>(Regex{Regex::Kind::alt, {}, std::move(a), std::move(b)});
}
inline RegexPtr re_star(RegexPtr a) {
  return std::make_shared<Regex>(Regex{Regex::Kind::star, {}, std::move(a), {}});
}

namespace detail {

inline bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '_';
}

struct RegexToken {
  enum class Kind { name, eps, any_action, any_percept, any_cycle, any_prefix,
                    alt, star, plus, opt, lbracket, rbracket, lparen, rparen, end };
  Kind kind;
  std::string text;
  int column;  // 1-based within the full source line
};

class RegexLexer {
 public:
  RegexLexer(std::string_view text, int line, int column_offset)
      : text_(text), line_(line), column_offset_(column_offset) {
    advance();
  }

  const RegexToken& peek() const { return current_; }

  RegexToken take() {
    RegexToken t = current_;
    advance();
    return t;
  }

  [[noreturn]] void error(const std::string& msg, int column) const {
    fail(Errc::syntax_error,
         "line " + std::to_string(line_) + ", column " + std::to_string(column) + ": " + msg);
  }

  int line() const { return line_; }

 private:
  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    int col = column_offset_ + static_cast<int>(pos_) + 1;
    if (pos_ >= text_.size()) {
      current_ = {RegexToken::Kind::end, "", col};
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '|': current_ = {RegexToken::Kind::alt, "|", col}; ++pos_; return;
      case '*': current_ = {RegexToken::Kind::star, "*", col}; ++pos_; return;
      case '+': current_ = {RegexToken::Kind::plus, "+", col}; ++pos_; return;
      case '?': current_ = {RegexToken::Kind::opt, "?", col}; ++pos_; return;
      case '[': current_ = {RegexToken::Kind::lbracket, "[", col}; ++pos_; return;
      case ']': current_ = {RegexToken::Kind::rbracket, "]", col}; ++pos_; return;
      case '(': current_ = {RegexToken::Kind::lparen, "(", col}; ++pos_; return;
      case ')': current_ = {RegexToken::Kind::rparen, ")", col}; ++pos_; return;
      case '%': current_ = {RegexToken::Kind::any_prefix, "%", col}; ++pos_; return;
      default: break;
    }
    if (c == '_') {
      // wildcard tokens _a, _p, _c
      if (pos_ + 1 < text_.size()) {
        char w = text_[pos_ + 1];
        bool lone = pos_ + 2 >= text_.size() || !is_name_char(text_[pos_ + 2]);
        if (lone && (w == 'a' || w == 'p' || w == 'c')) {
          auto kind = w == 'a'   ? RegexToken::Kind::any_action
                      : w == 'p' ? RegexToken::Kind::any_percept
                                 : RegexToken::Kind::any_cycle;
          current_ = {kind, std::string(text_.substr(pos_, 2)), col};
          pos_ += 2;
          return;
        }
      }
      error("unknown wildcard (expected _a, _p or _c)", col);
    }
    if (is_name_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word == "eps") {
        current_ = {RegexToken::Kind::eps, word, col};
      } else {
        current_ = {RegexToken::Kind::name, word, col};
      }
      return;
    }
    error(std::string("unexpected character '") + c + "'", col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  RegexToken current_{RegexToken::Kind::end, "", 0};
  int line_;
  int column_offset_;
};

}  // namespace detail

/// Parses the good-language expression. `line` and `column_offset` locate the
/// text within its source file so syntax errors point at the right place.
/// Symbol names must be declared in `alphabet` (UndeclaredSymbol otherwise).
RegexPtr parse_regex(std::string_view text, const Alphabet& alphabet, int line = 1,
                     int column_offset = 0);

namespace detail {

class RegexParser {
 public:
  RegexParser(std::string_view text, const Alphabet& alphabet, int line, int column_offset)
      : lex_(text, line, column_offset), alphabet_(alphabet) {}

  RegexPtr parse() {
    RegexPtr e = parse_alt();
    const auto& t = lex_.peek();
    if (t.kind != RegexToken::Kind::end) {
      if (t.kind == RegexToken::Kind::rparen)
        lex_.error("unbalanced ')'", t.column);
      lex_.error("unexpected '" + t.text + "'", t.column);
    }
    return e;
  }

 private:
  using TK = RegexToken::Kind;

  bool starts_atom(TK k) const {
    return k == TK::name || k == TK::eps || k == TK::any_action || k == TK::any_percept ||
           k == TK::any_cycle || k == TK::any_prefix || k == TK::lbracket || k == TK::lparen;
  }

  RegexPtr parse_alt() {
    RegexPtr e = parse_cat();
    while (lex_.peek().kind == TK::alt) {
      lex_.take();
      e = re_alt(std::move(e), parse_cat());
    }
    return e;
  }

  RegexPtr parse_cat() {
    const auto& t = lex_.peek();
    if (!starts_atom(t.kind))
      lex_.error(t.kind == TK::end ? "expected an expression"
                                   : "expected an expression before '" + t.text + "'",
                 t.column);
    RegexPtr e = parse_rep();
    while (starts_atom(lex_.peek().kind)) e = re_cat(std::move(e), parse_rep());
    return e;
  }

  RegexPtr parse_rep() {
    RegexPtr e = parse_atom();
    switch (lex_.peek().kind) {
      case TK::star:
        lex_.take();
        return re_star(std::move(e));
      case TK::plus:
        lex_.take();
        return re_cat(e, re_star(e));
      case TK::opt:
        lex_.take();
        return re_alt(std::move(e), re_epsilon());
      default:
        return e;
    }
  }

  std::vector<Symbol> all_of(SymbolKind kind) const {
    std::vector<Symbol> out;
    int n = kind == SymbolKind::action ? alphabet_.num_actions() : alphabet_.num_percepts();
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(Symbol{kind, i});
    return out;
  }

  RegexPtr any_cycle() {
    return re_cat(re_symbols(all_of(SymbolKind::action)), re_symbols(all_of(SymbolKind::percept)));
  }

  Symbol lookup(const RegexToken& t) const {
    if (auto s = alphabet_.find(t.text)) return *s;
    fail(Errc::undeclared_symbol, "'" + t.text + "' is not declared in the alphabet");
  }

  RegexPtr parse_atom() {
    RegexToken t = lex_.take();
    switch (t.kind) {
      case TK::name:
        return re_symbols({lookup(t)});
      case TK::eps:
        return re_epsilon();
      case TK::any_action:
        return re_symbols(all_of(SymbolKind::action));
      case TK::any_percept:
        return re_symbols(all_of(SymbolKind::percept));
      case TK::any_cycle:
        return any_cycle();
      case TK::any_prefix:
        return re_star(any_cycle());
      case TK::lbracket: {
        std::vector<Symbol> syms;
        while (lex_.peek().kind == TK::name) syms.push_back(lookup(lex_.take()));
        RegexToken close = lex_.take();
        if (close.kind != TK::rbracket)
          lex_.error("expected symbol name or ']' in class", close.column);
        if (syms.empty()) lex_.error("empty symbol class", t.column);
        return re_symbols(std::move(syms));
      }
      case TK::lparen: {
        RegexPtr e = parse_alt();
        RegexToken close = lex_.take();
        if (close.kind != TK::rparen) lex_.error("unbalanced '('", t.column);
        return e;
      }
      default:
        lex_.error("unexpected '" + t.text + "'", t.column);
    }
  }

  RegexLexer lex_;
  const Alphabet& alphabet_;
};

}  // namespace detail

inline RegexPtr parse_regex(std::string_view text, const Alphabet& alphabet, int line,
                            int column_offset) {
  return detail::RegexParser(text, alphabet, line, column_offset).parse();
}

}  // namespace deon
