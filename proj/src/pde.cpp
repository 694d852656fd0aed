#include "rdtm/pde.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "rdtm/error.hpp"
#include "rdtm/parse.hpp"

namespace rdtm {

PdeTerm PdeTerm::product(double coefficient, std::vector<int> derivative_orders, int x_power, int t_power) {
  PdeTerm term;
  term.coefficient = coefficient;
  term.x_power = x_power;
  term.t_power = t_power;
  term.derivative_orders = std::move(derivative_orders);
  return term;
}

PdeTerm PdeTerm::source(double coefficient, Expr g, int t_power, int x_power) {
  PdeTerm term;
  term.coefficient = coefficient;
  term.x_power = x_power;
  term.t_power = t_power;
  term.forcing = std::move(g);
  return term;
}

void PdeSpec::validate() const {
  if (time_order < 1) throw DomainError("time order must be at least 1");
  for (const auto& term : rhs_terms) {
    if (!std::isfinite(term.coefficient)) throw DomainError("term coefficient is not finite");
    if (term.x_power < 0 || term.t_power < 0) throw DomainError("term powers must be non-negative");
    if (term.is_forcing()) {
      if (!term.derivative_orders.empty()) throw DomainError("forcing term cannot carry u factors");
      if (contains_t(*term.forcing)) throw DomainError("forcing g(x) must not depend on t");
    } else {
      if (term.derivative_orders.empty()) throw DomainError("term has no u factor");
      for (int p : term.derivative_orders) {
        if (p < 0) throw DomainError("derivative order must be non-negative");
      }
    }
  }
}

BuiltinProblem builtin_pde(std::string_view name) {
  if (name == "heat") {
    return {"heat", PdeSpec{1, {PdeTerm::product(1.0, {2})}}, parse_expr("cos(pi/2*x)"),
            parse_expr("exp(-pi^2/4*t)*cos(pi/2*x)")};
  }
  if (name == "burgers") {
    return {"burgers", PdeSpec{1, {PdeTerm::product(-1.0, {0, 1}), PdeTerm::product(1.0, {2})}},
            Expr::x(), parse_expr("x/(1+t)")};
  }
  throw DomainError("unknown problem '" + std::string(name) + "' (expected heat or burgers)");
}

// ---------------------------------------------------------------------------
// Transform rules

Expr convolve(std::span<const Expr> u, std::span<const Expr> v, std::size_t k) {
  if (u.size() <= k || v.size() <= k) {
    throw DomainError("convolution index " + std::to_string(k) + " exceeds available spectra");
  }
  std::vector<Expr> terms;
  terms.reserve(k + 1);
  for (std::size_t r = 0; r <= k; ++r) {
    if (u[r].is_zero() || v[k - r].is_zero()) continue;
    terms.push_back(Expr::product({u[r], v[k - r]}));
  }
  return simplify(Expr::sum(std::move(terms)));
}

Expr multi_convolve(std::span<const Spectra> factors, std::size_t k) {
  if (factors.empty()) throw DomainError("multi_convolve needs at least one factor");
  for (const auto& f : factors) {
    if (f.size() <= k) throw DomainError("convolution index " + std::to_string(k) + " exceeds available spectra");
  }
  if (factors.size() == 1) return factors.front()[k];

  Spectra running(factors.front().begin(), factors.front().begin() + static_cast<std::ptrdiff_t>(k + 1));
  for (std::size_t f = 1; f < factors.size(); ++f) {
    if (f + 1 == factors.size()) return convolve(running, factors[f], k);
    Spectra next(k + 1);
    for (std::size_t j = 0; j <= k; ++j) next[j] = convolve(running, factors[f], j);
    running = std::move(next);
  }
  return running[k];
}

Expr transform_forcing(const Expr& g, int n, std::size_t k) {
  if (contains_t(g)) throw DomainError("forcing g(x) must not depend on t");
  return n >= 0 && k == static_cast<std::size_t>(n) ? g : Expr();
}

Expr transform_shifted(int m, int n, std::span<const Expr> u, std::size_t k) {
  if (m < 0 || n < 0) throw DomainError("powers must be non-negative");
  if (k < static_cast<std::size_t>(n)) return Expr();
  const std::size_t index = k - static_cast<std::size_t>(n);
  if (index >= u.size()) throw DomainError("spectrum U_" + std::to_string(index) + " is not available");
  if (m == 0) return u[index];
  return expr_mul(Expr::power(Expr::x(), m), u[index]);
}

double time_shift_factor(std::size_t k, int r) {
  if (r < 1) throw DomainError("time order must be at least 1");
  constexpr double kExactLimit = 9007199254740992.0;  // 2^53
  double factor = 1.0;
  for (int i = 1; i <= r; ++i) {
    factor *= static_cast<double>(k) + i;
    if (factor > kExactLimit) throw NumericError("time shift factor overflows exact double range");
  }
  return factor;
}

Expr advance(const PdeSpec& pde, std::span<const Expr> spectra, std::size_t node_cap) {
  SpectrumBuilder builder(pde, Spectra(spectra.begin(), spectra.end()), node_cap);
  return builder.spectrum(spectra.size());
}

// ---------------------------------------------------------------------------

SpectrumBuilder::SpectrumBuilder(PdeSpec pde, Spectra initial, std::size_t node_cap)
    : pde_(std::move(pde)), spectra_(std::move(initial)), node_cap_(node_cap) {
  pde_.validate();
  if (spectra_.size() < static_cast<std::size_t>(pde_.time_order)) {
    throw DomainError("need " + std::to_string(pde_.time_order) + " initial spectra, got " +
                      std::to_string(spectra_.size()));
  }
  for (const auto& s : spectra_) {
    if (contains_t(s)) throw DomainError("spectra must not depend on t");
  }
}

Expr SpectrumBuilder::spectrum(std::size_t k) {
  while (spectra_.size() <= k) spectra_.push_back(next());
  return spectra_[k];
}

Expr SpectrumBuilder::derivative(std::size_t index, int order) {
  if (order == 0) return spectra_[index];
  if (derivatives_.size() < static_cast<std::size_t>(order)) derivatives_.resize(order);
  auto& column = derivatives_[order - 1];
  while (column.size() <= index) {
    const std::size_t j = column.size();
    column.push_back(differentiate_x(derivative(j, order - 1)));
  }
  return column[index];
}

Expr SpectrumBuilder::next() {
  const std::size_t r = static_cast<std::size_t>(pde_.time_order);
  const std::size_t k = spectra_.size() - r;

  std::vector<Expr> contributions;
  for (const auto& term : pde_.rhs_terms) {
    Expr w;
    if (term.is_forcing()) {
      w = transform_forcing(*term.forcing, term.t_power, k);
    } else {
      if (k < static_cast<std::size_t>(term.t_power)) continue;
      const std::size_t index = k - static_cast<std::size_t>(term.t_power);
      std::vector<Spectra> factors;
      factors.reserve(term.derivative_orders.size());
      for (int p : term.derivative_orders) {
        Spectra column(index + 1);
        for (std::size_t j = 0; j <= index; ++j) column[j] = derivative(j, p);
        factors.push_back(std::move(column));
      }
      w = multi_convolve(factors, index);
    }
    if (w.is_zero()) continue;
    if (term.x_power > 0) w = Expr::product({Expr::power(Expr::x(), term.x_power), w});
    contributions.push_back(Expr::scale(term.coefficient, w));
  }

  Expr next = simplify(Expr::scale(1.0 / time_shift_factor(k, pde_.time_order),
                                   Expr::sum(std::move(contributions))));
  if (const std::size_t n = node_count(next); n > node_cap_) throw NodeCapError(n, node_cap_);
  return next;
}

// ---------------------------------------------------------------------------
// Term DSL

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Piece {
  std::string_view text;
  std::size_t offset;
};

// Splits at top-level `separators`; a sign directly after an operator or an
// exponent marker stays inside the piece.
std::vector<Piece> split_top_level(std::string_view text, std::size_t base, bool on_signs,
                                   std::vector<bool>* negative) {
  std::vector<Piece> pieces;
  int depth = 0;
  std::size_t start = 0;
  bool sign_negative = false;
  char previous = '\0';
  auto is_number_exponent = [&](std::size_t i) {
    if (i < 2) return false;
    const char e = text[i - 1];
    const char d = text[i - 2];
    return (e == 'e' || e == 'E') && (std::isdigit(static_cast<unsigned char>(d)) || d == '.');
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')'", base + i);
    }
    bool split = false;
    if (depth == 0) {
      if (on_signs && (c == '+' || c == '-')) {
        const bool leading = trim(text.substr(start, i - start)).empty();
        const bool after_operator = previous == '*' || previous == '/' || previous == '^' || previous == '(' ||
                                    previous == ',' || previous == '+' || previous == '-';
        if (leading && pieces.empty() && previous == '\0') {
          sign_negative = c == '-';
          start = i + 1;
        } else if (!after_operator && !is_number_exponent(i)) {
          split = true;
        }
      } else if (!on_signs && c == '*') {
        split = true;
      }
    }
    if (split) {
      pieces.push_back({text.substr(start, i - start), base + start});
      if (negative) negative->push_back(sign_negative);
      sign_negative = c == '-';
      start = i + 1;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) previous = c;
  }
  if (depth != 0) throw ParseError("unbalanced '('", base + text.size());
  pieces.push_back({text.substr(start), base + start});
  if (negative) negative->push_back(sign_negative);
  return pieces;
}

int parse_int(std::string_view s, std::size_t offset) {
  s = trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    throw ParseError("expected a non-negative integer", offset);
  }
  return value;
}

// Matches `name` or `name^k`; returns the power or -1.
int match_power(std::string_view factor, char name, std::size_t offset) {
  if (factor.empty() || factor.front() != name) return -1;
  std::string_view rest = trim(factor.substr(1));
  if (rest.empty()) return 1;
  if (rest.front() != '^') return -1;
  return parse_int(rest.substr(1), offset);
}

PdeTerm parse_term(std::string_view text, std::size_t offset, bool negative) {
  if (trim(text).empty()) throw ParseError("empty term", offset);
  double coefficient = negative ? -1.0 : 1.0;
  int x_power = 0;
  int t_power = 0;
  std::vector<int> orders;
  std::optional<Expr> g;
  for (const auto& [raw, at] : split_top_level(text, offset, false, nullptr)) {
    const std::string_view factor = trim(raw);
    if (factor.empty()) throw ParseError("empty factor", at);
    if (factor == "u") {
      orders.push_back(0);
      continue;
    }
    if (factor.starts_with("dx(") && factor.ends_with(")")) {
      const std::string_view inside = trim(factor.substr(3, factor.size() - 4));
      if (inside == "u") {
        orders.push_back(1);
        continue;
      }
      const auto comma = inside.find(',');
      if (comma == std::string_view::npos || trim(inside.substr(0, comma)) != "u") {
        throw ParseError("expected dx(u) or dx(u,p)", at);
      }
      orders.push_back(parse_int(inside.substr(comma + 1), at));
      continue;
    }
    if (const int m = match_power(factor, 'x', at); m >= 0) {
      x_power += m;
      continue;
    }
    if (const int n = match_power(factor, 't', at); n >= 0) {
      t_power += n;
      continue;
    }
    Expr e;
    try {
      e = parse_expr(factor);
    } catch (const ParseError& err) {
      throw ParseError("bad factor '" + std::string(factor) + "'", at + err.position());
    }
    if (contains_t(e)) throw ParseError("time dependence must be written as a t^n factor", at);
    if (is_closed_constant(e)) {
      coefficient *= evaluate(e, 0.0, 0.0);
    } else {
      g = g ? expr_mul(*g, e) : e;
    }
  }
  if (!orders.empty() && g) throw ParseError("a term cannot combine u factors with a g(x) factor", offset);
  if (orders.empty()) return PdeTerm::source(coefficient, g ? *g : Expr::constant(1.0), t_power, x_power);
  return PdeTerm::product(coefficient, std::move(orders), x_power, t_power);
}

}  // namespace

PdeSpec parse_terms(std::string_view text) {
  if (trim(text).empty()) throw ParseError("empty term list", 0);
  std::vector<bool> negative;
  const auto pieces = split_top_level(text, 0, true, &negative);
  PdeSpec spec;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    spec.rhs_terms.push_back(parse_term(pieces[i].text, pieces[i].offset, negative[i]));
  }
  spec.validate();
  return spec;
}

std::string to_string(const PdeSpec& pde) {
  std::string out;
  for (std::size_t i = 0; i < pde.rhs_terms.size(); ++i) {
    const auto& term = pde.rhs_terms[i];
    double c = term.coefficient;
    if (i > 0) {
      out += c < 0.0 ? " - " : " + ";
      c = std::abs(c);
    }
    out += format_number(c);
    if (term.x_power > 0) out += " * x^" + std::to_string(term.x_power);
    if (term.is_forcing()) out += " * (" + to_string(*term.forcing) + ")";
    if (term.t_power > 0) out += " * t^" + std::to_string(term.t_power);
    for (int p : term.derivative_orders) {
      out += p == 0 ? " * u" : p == 1 ? " * dx(u)" : " * dx(u," + std::to_string(p) + ")";
    }
  }
  return out;
}

}  // namespace rdtm
