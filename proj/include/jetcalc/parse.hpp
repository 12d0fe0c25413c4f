#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetcalc/errors.hpp"
#include "jetcalc/free_module.hpp"
#include "jetcalc/operator.hpp"
#include "jetcalc/poly.hpp"
#include "jetcalc/rational.hpp"

namespace jetcalc {

/// Variable names for axes 0..3.
inline constexpr std::string_view kVariableNames = "xyzw";

namespace detail {

struct Token {
  enum class Kind { number, variable, derivative, symbol, end };
  Kind kind;
  std::string text;
  std::size_t pos;
  std::size_t axis = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { tokenize(); }

  const Token& peek() const { return tokens_[index_]; }
  Token next() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }

  bool accept(char symbol) {
    if (peek().kind == Token::Kind::symbol && peek().text[0] == symbol) {
      ++index_;
      return true;
    }
    return false;
  }

  void expect(char symbol) {
    if (!accept(symbol)) throw ParseError(std::string("expected '") + symbol + "'", peek().pos);
  }

  bool at_symbol(char symbol) const { return peek().kind == Token::Kind::symbol && peek().text[0] == symbol; }
  bool at_end() const { return peek().kind == Token::Kind::end; }

  void expect_end() {
    if (!at_end()) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
  }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i;
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        tokens_.push_back({Token::Kind::number, std::string(text_.substr(start, i - start)), start});
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = i;
        while (i < text_.size() && std::isalnum(static_cast<unsigned char>(text_[i]))) ++i;
        std::string word(text_.substr(start, i - start));
        auto axis_of = [](char v) { return kVariableNames.find(v); };
        if (word.size() == 1 && axis_of(word[0]) != std::string_view::npos) {
          tokens_.push_back({Token::Kind::variable, word, start, axis_of(word[0])});
        } else if (word.size() == 2 && word[0] == 'd' && axis_of(word[1]) != std::string_view::npos) {
          tokens_.push_back({Token::Kind::derivative, word, start, axis_of(word[1])});
        } else {
          throw ParseError("unknown identifier '" + word + "'", start);
        }
      } else if (std::string_view("+-*/^()[],").find(c) != std::string_view::npos) {
        tokens_.push_back({Token::Kind::symbol, std::string(1, c), i});
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
    }
    tokens_.push_back({Token::Kind::end, "end of input", text_.size()});
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

inline unsigned parse_exponent(Lexer& lex) {
  Token t = lex.next();
  if (t.kind != Token::Kind::number) throw ParseError("expected integer exponent", t.pos);
  if (t.text.size() > 4) throw ParseError("exponent too large", t.pos);
  return static_cast<unsigned>(std::stoul(t.text));
}

inline Rational parse_divisor(Lexer& lex) {
  Token t = lex.next();
  if (t.kind != Token::Kind::number) throw ParseError("expected integer divisor", t.pos);
  Integer d(t.text, 10);
  if (d == 0) throw ParseError("division by zero", t.pos);
  return Rational(1) / Rational(d);
}

inline void check_axis(const Token& t, std::size_t dim) {
  if (t.axis >= dim)
    throw ParseError("variable '" + t.text + "' exceeds dimension " + std::to_string(dim), t.pos);
}

// Polynomial grammar:
//   expr   := [+|-] term ((+|-) term)*
//   term   := factor (('*' factor) | ('/' integer))*
//   factor := primary ['^' integer]
//   primary:= integer | variable | '(' expr ')'
class PolyParser {
 public:
  PolyParser(Lexer& lex, std::size_t dim) : lex_(lex), dim_(dim) {}

  Poly expr() {
    Poly acc(dim_);
    bool negate = false;
    if (lex_.accept('-')) negate = true;
    else lex_.accept('+');
    Poly first = term();
    acc = negate ? -first : first;
    while (true) {
      if (lex_.accept('+')) acc += term();
      else if (lex_.accept('-')) acc -= term();
      else break;
    }
    return acc;
  }

 private:
  Poly term() {
    Poly acc = factor();
    while (true) {
      if (lex_.accept('*')) acc *= factor();
      else if (lex_.accept('/')) acc *= parse_divisor(lex_);
      else break;
    }
    return acc;
  }

  Poly factor() {
    Poly base = primary();
    if (lex_.accept('^')) return pow(base, parse_exponent(lex_));
    return base;
  }

  Poly primary() {
    Token t = lex_.next();
    switch (t.kind) {
      case Token::Kind::number:
        return Poly::constant(dim_, Rational(Integer(t.text, 10)));
      case Token::Kind::variable:
        check_axis(t, dim_);
        return Poly::variable(dim_, t.axis);
      case Token::Kind::symbol:
        if (t.text == "(") {
          Poly inner = expr();
          lex_.expect(')');
          return inner;
        }
        break;
      default:
        break;
    }
    throw ParseError("unexpected '" + t.text + "' in polynomial", t.pos);
  }

  Lexer& lex_;
  std::size_t dim_;
};

// Operator grammar: the polynomial grammar extended with derivative
// generators dx..dw and bracketed multiplications [poly]; '*' composes.
class OperatorParser {
 public:
  OperatorParser(Lexer& lex, std::size_t dim) : lex_(lex), dim_(dim) {}

  OperatorExpr expr() {
    bool negate = false;
    if (lex_.accept('-')) negate = true;
    else lex_.accept('+');
    OperatorExpr acc = term();
    if (negate) acc = OperatorExpr::scale(Rational(-1), std::move(acc));
    while (true) {
      if (lex_.accept('+')) acc = OperatorExpr::sum(std::move(acc), term());
      else if (lex_.accept('-')) acc = OperatorExpr::sum(std::move(acc), OperatorExpr::scale(Rational(-1), term()));
      else break;
    }
    return acc;
  }

 private:
  OperatorExpr term() {
    OperatorExpr acc = factor();
    while (true) {
      if (lex_.accept('*')) acc = OperatorExpr::compose(std::move(acc), factor());
      else if (lex_.accept('/')) acc = OperatorExpr::scale(parse_divisor(lex_), std::move(acc));
      else break;
    }
    return acc;
  }

  OperatorExpr factor() {
    OperatorExpr base = primary();
    if (lex_.accept('^')) {
      unsigned e = parse_exponent(lex_);
      OperatorExpr acc = OperatorExpr::multiply(Poly::constant(dim_, Rational(1)));
      for (unsigned i = 0; i < e; ++i) acc = OperatorExpr::compose(std::move(acc), base);
      return acc;
    }
    return base;
  }

  OperatorExpr primary() {
    Token t = lex_.next();
    switch (t.kind) {
      case Token::Kind::number:
        return OperatorExpr::multiply(Poly::constant(dim_, Rational(Integer(t.text, 10))));
      case Token::Kind::variable:
        check_axis(t, dim_);
        return OperatorExpr::multiply(Poly::variable(dim_, t.axis));
      case Token::Kind::derivative:
        check_axis(t, dim_);
        return OperatorExpr::derivative(dim_, t.axis);
      case Token::Kind::symbol:
        if (t.text == "(") {
          OperatorExpr inner = expr();
          lex_.expect(')');
          return inner;
        }
        if (t.text == "[") {
          Poly f = PolyParser(lex_, dim_).expr();
          lex_.expect(']');
          return OperatorExpr::multiply(f);
        }
        break;
      default:
        break;
    }
    throw ParseError("unexpected '" + t.text + "' in operator", t.pos);
  }

  Lexer& lex_;
  std::size_t dim_;
};

inline bool starts_with_nested_bracket(std::string_view text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i >= text.size() || text[i] != '[') return false;
  ++i;
  skip();
  return i < text.size() && text[i] == '[';
}

/// Parses `[[a, b], [c, d]]` with `entry` reading one element.
template <class Entry, class Fn>
std::vector<std::vector<Entry>> parse_nested_rows(Lexer& lex, Fn&& entry) {
  std::vector<std::vector<Entry>> rows;
  lex.expect('[');
  do {
    std::size_t row_pos = lex.peek().pos;
    lex.expect('[');
    std::vector<Entry> row;
    do {
      row.push_back(entry());
    } while (lex.accept(','));
    lex.expect(']');
    if (!rows.empty() && rows.front().size() != row.size()) throw ParseError("ragged matrix row", row_pos);
    rows.push_back(std::move(row));
  } while (lex.accept(','));
  lex.expect(']');
  lex.expect_end();
  return rows;
}

}  // namespace detail

/// Smallest dimension covering every variable or derivative named in `text`
/// (at least 1).
inline std::size_t infer_dimension(std::string_view text) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) continue;
    std::size_t start = i;
    while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view word = text.substr(start, i - start);
    char v = word.size() == 1 ? word[0] : (word.size() == 2 && word[0] == 'd' ? word[1] : '\0');
    if (auto axis = kVariableNames.find(v); v != '\0' && axis != std::string_view::npos) dim = std::max(dim, axis + 1);
  }
  return dim;
}

inline Poly parse_poly(std::string_view text, std::size_t dim) {
  detail::Lexer lex(text);
  Poly p = detail::PolyParser(lex, dim).expr();
  lex.expect_end();
  return p;
}

/// Comma-separated polynomial components, e.g. `x^2, y`.
inline FreeModuleElement parse_section(std::string_view text, std::size_t dim) {
  detail::Lexer lex(text);
  std::vector<Poly> comps;
  do {
    comps.push_back(detail::PolyParser(lex, dim).expr());
  } while (lex.accept(','));
  lex.expect_end();
  return FreeModuleElement(std::move(comps));
}

/// `[[p11, p12], [p21, p22]]` or a single polynomial (1×1).
inline PolyMatrix parse_poly_matrix(std::string_view text, std::size_t dim) {
  if (!detail::starts_with_nested_bracket(text)) return PolyMatrix::scalar(parse_poly(text, dim));
  detail::Lexer lex(text);
  auto rows = detail::parse_nested_rows<Poly>(lex, [&] { return detail::PolyParser(lex, dim).expr(); });
  PolyMatrix m(dim, rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

inline OperatorExpr parse_operator_expr(std::string_view text, std::size_t dim) {
  detail::Lexer lex(text);
  if (detail::starts_with_nested_bracket(text)) {
    auto rows = detail::parse_nested_rows<OperatorExpr>(lex, [&] { return detail::OperatorParser(lex, dim).expr(); });
    std::vector<OperatorExpr> entries;
    for (auto& row : rows)
      for (auto& e : row) entries.push_back(std::move(e));
    std::size_t r = rows.size(), c = rows.front().size();
    return OperatorExpr::block(r, c, std::move(entries));
  }
  OperatorExpr e = detail::OperatorParser(lex, dim).expr();
  lex.expect_end();
  return e;
}

inline NormalOperator parse_operator(std::string_view text, std::size_t dim) {
  return normalize(parse_operator_expr(text, dim));
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string monomial_string(const MultiIndex& m, std::string_view prefix = "") {
  std::string out;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += prefix;
    out += kVariableNames[i];
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out;
}

inline void append_signed(std::string& out, const Rational& c, const std::string& body) {
  Rational mag = abs(c);
  std::string term;
  if (body.empty()) term = to_string(mag);
  else if (mag == 1) term = body;
  else term = to_string(mag) + "*" + body;
  if (out.empty()) out = (c < 0 ? "-" : "") + term;
  else out += (c < 0 ? " - " : " + ") + term;
}

}  // namespace detail

/// Canonical text, highest graded-lex term first: `3/2*x^2*y - x + 1`.
inline std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
    detail::append_signed(out, it->second, detail::monomial_string(it->first));
  return out;
}

inline std::string to_string(const FreeModuleElement& s) {
  std::string out;
  for (std::size_t i = 0; i < s.rank(); ++i) out += (i ? ", " : "") + to_string(s[i]);
  return out;
}

namespace detail {

inline std::string scalar_operator_string(const std::vector<std::pair<MultiIndex, Poly>>& terms) {
  std::string out;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [alpha, c] = *it;
    std::string deriv = monomial_string(alpha, "d");
    if (c.is_constant()) {
      append_signed(out, c.constant_term(), deriv);
    } else {
      std::string body = "[" + to_string(c) + "]" + (deriv.empty() ? "" : "*" + deriv);
      out += out.empty() ? body : " + " + body;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace detail

/// Operator literal in the input grammar; matrices print as `[[..], [..]]`.
inline std::string to_string(const NormalOperator& op) {
  auto entry = [&](std::size_t r, std::size_t c) {
    std::vector<std::pair<MultiIndex, Poly>> terms;
    for (const auto& [alpha, m] : op.coefficients())
      if (!m(r, c).is_zero()) terms.emplace_back(alpha, m(r, c));
    return detail::scalar_operator_string(terms);
  };
  if (op.m_in() == 1 && op.m_out() == 1) return entry(0, 0);
  std::string out = "[";
  for (std::size_t r = 0; r < op.m_out(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < op.m_in(); ++c) out += (c ? ", " : "") + entry(r, c);
    out += "]";
  }
  return out + "]";
}

inline std::string to_string(const PolyMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + to_string(m(r, c));
    out += "]";
  }
  return out + "]";
}

}  // namespace jetcalc
