#pragma once

// Tiny arithmetic expression evaluator so CLI flags can take exact-looking
// values like "2*sqrt(1/5)" instead of truncated decimals. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('+'|'-') factor | primary ('^' factor)?
//   primary:= number | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')'
// Errors throw std::invalid_argument; the CLI reports them as usage errors.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace resonator::expr {

namespace detail {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("expression error at position " + std::to_string(pos) +
                                " in '" + s + "': " + what);
  }

  double parse_expr() {
    double v = parse_term();
    for (;;) {
      if (eat('+')) v += parse_term();
      else if (eat('-')) v -= parse_term();
      else return v;
    }
  }

  double parse_term() {
    double v = parse_factor();
    for (;;) {
      if (eat('*')) v *= parse_factor();
      else if (eat('/')) v /= parse_factor();
      else return v;
    }
  }

  double parse_factor() {
    if (eat('+')) return parse_factor();
    if (eat('-')) return -parse_factor();
    double v = parse_primary();
    if (eat('^')) return std::pow(v, parse_factor());
    return v;
  }

  bool match_word(const char* w) {
    skip_ws();
    size_t n = std::char_traits<char>::length(w);
    if (s.compare(pos, n, w) != 0) return false;
    size_t after = pos + n;
    if (after < s.size() && (std::isalnum(static_cast<unsigned char>(s[after])) || s[after] == '_'))
      return false;
    pos = after;
    return true;
  }

  double parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    if (match_word("pi")) return 3.14159265358979323846;
    if (match_word("sqrt")) {
      if (!eat('(')) fail("expected '(' after sqrt");
      double v = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return std::sqrt(v);
    }
    if (eat('(')) {
      double v = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    char* end = nullptr;
    double v = std::strtod(s.c_str() + pos, &end);
    if (end == s.c_str() + pos) fail("expected a number");
    pos = static_cast<size_t>(end - s.c_str());
    return v;
  }
};

}  // namespace detail

inline double parse_real(const std::string& text) {
  detail::Parser p(text);
  double v = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  return v;
}

}  // namespace resonator::expr
