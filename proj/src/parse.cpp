#include "rdtm/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "rdtm/error.hpp"

namespace rdtm {
namespace {

Expr negate(const Expr& e) {
  if (e.is_constant()) return Expr::constant(-e.value());
  if (e.kind() == NodeKind::Scale) return Expr::scale(-e.value(), e.child());
  return Expr::scale(-1.0, e);
}

Expr combine_sum(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  std::vector<Expr> children;
  if (a.kind() == NodeKind::Sum) {
    children.assign(a.children().begin(), a.children().end());
  } else {
    children.push_back(a);
  }
  children.push_back(b);
  return Expr::sum(std::move(children));
}

Expr combine_product(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant()) return a.value() == 1.0 ? b : Expr::scale(a.value(), b);
  if (b.is_constant()) return b.value() == 1.0 ? a : Expr::scale(b.value(), a);
  if (a.kind() == NodeKind::Scale) return Expr::scale(a.value(), combine_product(a.child(), b));
  std::vector<Expr> children;
  if (a.kind() == NodeKind::Product) {
    children.assign(a.children().begin(), a.children().end());
  } else {
    children.push_back(a);
  }
  children.push_back(b);
  return Expr::product(std::move(children));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr left = term();
    while (true) {
      if (accept('+')) {
        left = combine_sum(left, term());
      } else if (accept('-')) {
        left = combine_sum(left, negate(term()));
      } else {
        return left;
      }
    }
  }

  Expr term() {
    Expr left = unary();
    while (true) {
      if (accept('*')) {
        left = combine_product(left, unary());
      } else if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        Expr divisor = unary();
        if (is_closed_constant(divisor)) {
          const double d = evaluate(divisor, 0.0, 0.0);
          if (d == 0.0) throw ParseError("division by zero", at);
          left = combine_product(left, Expr::constant(1.0 / d));
        } else if (is_x_free(divisor)) {
          left = combine_product(left, Expr::reciprocal(divisor));
        } else {
          throw ParseError("division by an x-dependent expression", at);
        }
      } else {
        return left;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return negate(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("exponent must be a non-negative integer literal", start);
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      throw ParseError("exponent must be a non-negative integer literal", start);
    }
    int n = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, n);
    if (ec != std::errc()) throw ParseError("exponent out of range", start);
    if (base.is_constant()) {
      double v = 1.0;
      for (int i = 0; i < n; ++i) v *= base.value();
      if (!std::isfinite(v)) throw ParseError("constant power overflows", start);
      return Expr::constant(v);
    }
    return Expr::power(base, n);
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return Expr::x();
      if (name == "t") return Expr::t();
      if (name == "pi") return Expr::constant(std::numbers::pi);
      if (name == "sin" || name == "cos" || name == "exp") {
        expect('(');
        Expr arg = expr();
        expect(')');
        Expr call = name == "sin" ? Expr::sin(arg) : name == "cos" ? Expr::cos(arg) : Expr::exp(arg);
        if (is_closed_constant(arg)) {
          try {
            return Expr::constant(evaluate(call, 0.0, 0.0));
          } catch (const NumericError&) {
            throw ParseError("constant overflows", start);
          }
        }
        return call;
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    if (!std::isfinite(v)) throw ParseError("number out of range", start);
    return Expr::constant(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace rdtm
