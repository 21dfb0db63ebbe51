// Polynomial text I/O: recursive-descent parser and canonical printer.
//
// Strict grammar:
//   expr   := '-'? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nat)?
//   atom   := ident | int | '(' expr ')' | '(' '-'? int '/' int ')'
// Compact mode adds juxtaposition as multiplication and `ident digits` as a
// power (`x2y` = x^2*y), resolved against the variable table.

#include <cctype>

#include "multipoint/errors.hpp"
#include "multipoint/poly.hpp"

namespace multipoint {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Parser {
 public:
  Parser(std::string_view src, VarTablePtr vars, ParseMode mode)
      : src_(src), vars_(std::move(vars)), mode_(mode) {}

  Poly parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    Poly p = parse_expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return p;
  }

 private:
  struct Piece {
    std::size_t var;
    std::uint32_t exp;
  };

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Poly parse_expr() {
    bool negate = accept('-');
    Poly acc = parse_term();
    if (negate) acc = -acc;
    for (;;) {
      if (accept('+')) {
        acc += parse_term();
      } else if (accept('-')) {
        acc -= parse_term();
      } else {
        return acc;
      }
    }
  }

  bool starts_atom() {
    skip_ws();
    char c = peek();
    return is_alpha(c) || is_digit(c) || c == '(';
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    for (;;) {
      if (accept('*')) {
        acc *= parse_factor();
      } else if (mode_ == ParseMode::compact && starts_atom()) {
        acc *= parse_factor();
      } else {
        return acc;
      }
    }
  }

  std::uint32_t parse_nat() {
    skip_ws();
    std::size_t start = pos_;
    while (is_digit(peek())) ++pos_;
    if (start == pos_) throw ParseError("expected exponent", pos_);
    auto text = src_.substr(start, pos_ - start);
    if (text.size() > 6) throw ParseError("exponent too large", start);
    return static_cast<std::uint32_t>(std::stoul(std::string(text)));
  }

  Poly parse_factor() {
    skip_ws();
    if (is_alpha(peek())) {
      std::vector<Piece> pieces = parse_ident();
      if (accept('^')) {
        auto e = parse_nat();
        pieces.back().exp *= e;
      }
      Monomial m(vars_->size());
      for (const auto& pc : pieces) m.set(pc.var, m[pc.var] + pc.exp);
      return Poly::from_terms(vars_, {Term{std::move(m), Rational(1)}});
    }
    Poly base = parse_atom();
    if (accept('^')) return pow(base, parse_nat());
    return base;
  }

  // Identifier token, possibly split into several powers in compact mode.
  std::vector<Piece> parse_ident() {
    std::size_t start = pos_;
    while (is_ident_char(peek())) ++pos_;
    std::string token(src_.substr(start, pos_ - start));
    if (auto i = vars_->index_of(token)) return {Piece{*i, 1}};
    if (mode_ == ParseMode::compact) {
      std::vector<Piece> pieces;
      if (split_compact(token, 0, pieces)) return pieces;
    }
    throw UnknownVariableError(token, start);
  }

  // Splits `token` from `at` into (name digits?)+ with names drawn from the table.
  bool split_compact(const std::string& token, std::size_t at, std::vector<Piece>& out) const {
    if (at == token.size()) return true;
    for (std::size_t len = token.size() - at; len >= 1; --len) {
      auto i = vars_->index_of(token.substr(at, len));
      if (!i) continue;
      std::size_t next = at + len;
      std::uint32_t exp = 1;
      std::size_t dstart = next;
      while (next < token.size() && is_digit(token[next])) ++next;
      if (next > dstart) {
        if (next - dstart > 6) continue;
        exp = static_cast<std::uint32_t>(std::stoul(token.substr(dstart, next - dstart)));
      }
      out.push_back({*i, exp});
      if (split_compact(token, next, out)) return true;
      out.pop_back();
    }
    return false;
  }

  Poly parse_atom() {
    skip_ws();
    std::size_t start = pos_;
    char c = peek();
    if (is_digit(c)) {
      while (is_digit(peek())) ++pos_;
      Integer value(std::string(src_.substr(start, pos_ - start)), 10);
      return Poly::constant(vars_, Rational(value));
    }
    if (c == '(') {
      ++pos_;
      if (auto q = try_rational()) {
        return Poly::constant(vars_, *q);
      }
      Poly inner = parse_expr();
      expect(')');
      return inner;
    }
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  // After '(': matches "-? int / int )" and consumes it, or leaves pos_ untouched.
  std::optional<Rational> try_rational() {
    std::size_t save = pos_;
    skip_ws();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
      skip_ws();
    }
    std::size_t nstart = pos_;
    while (is_digit(peek())) ++pos_;
    if (nstart == pos_) {
      pos_ = save;
      return std::nullopt;
    }
    std::string num(src_.substr(nstart, pos_ - nstart));
    skip_ws();
    if (peek() != '/') {
      pos_ = save;
      return std::nullopt;
    }
    ++pos_;
    skip_ws();
    std::size_t dstart = pos_;
    while (is_digit(peek())) ++pos_;
    if (dstart == pos_) throw ParseError("expected denominator", pos_);
    std::string den(src_.substr(dstart, pos_ - dstart));
    Integer d(den, 10);
    if (d == 0) throw ParseError("zero denominator", dstart);
    expect(')');
    Rational q = make_rational(Integer(num, 10), d);
    return neg ? Rational(-q) : q;
  }

  std::string_view src_;
  VarTablePtr vars_;
  ParseMode mode_;
  std::size_t pos_ = 0;
};

bool single_letter_names(const VarTable& vars) {
  for (const auto& v : vars.vars()) {
    if (v.name.size() != 1) return false;
  }
  return true;
}

std::string render_coeff(const Rational& magnitude) {
  if (is_integer(magnitude)) return magnitude.get_num().get_str();
  return "(" + to_string(magnitude) + ")";
}

}  // namespace

std::string render_monomial(const Monomial& m, const VarTable& vars) {
  if (m.is_one()) return "1";
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.name(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

std::string render(const Poly& p, RenderStyle style) {
  if (p.is_zero()) return "0";
  const VarTable& vars = *p.vars();
  const bool compact = style == RenderStyle::compact && single_letter_names(vars);
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    bool negative = t.coeff < 0;
    Rational magnitude = negative ? Rational(-t.coeff) : t.coeff;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? '-' : '+';
    }
    first = false;
    if (t.monomial.is_one()) {
      out += render_coeff(magnitude);
      continue;
    }
    if (compact) {
      if (magnitude != 1) out += render_coeff(magnitude);
      for (std::size_t i = 0; i < t.monomial.size(); ++i) {
        if (t.monomial[i] == 0) continue;
        out += vars.name(i);
        if (t.monomial[i] > 1) out += std::to_string(t.monomial[i]);
      }
    } else {
      if (magnitude != 1) out += render_coeff(magnitude) + "*";
      out += render_monomial(t.monomial, vars);
    }
  }
  return out;
}

Poly parse_poly(std::string_view src, const VarTablePtr& vars, ParseMode mode) {
  return Parser(src, vars, mode).parse();
}

}  // namespace multipoint
