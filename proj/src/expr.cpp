#include "rdtm/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <map>
#include <utility>

#include "rdtm/error.hpp"

namespace rdtm {

struct Expr::Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  int exponent = 0;
  std::vector<Expr> children;
};

namespace {

std::shared_ptr<const Expr::Node> zero_node() {
  static const auto node = std::make_shared<const Expr::Node>();
  return node;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  require_finite(value, "constant");
  if (value == 0.0) return Expr();
  return Expr(std::make_shared<const Node>(Node{NodeKind::Constant, value, 0, {}}));
}

Expr Expr::x() {
  static const Expr e(std::make_shared<const Node>(Node{NodeKind::VarX, 0.0, 0, {}}));
  return e;
}

Expr Expr::t() {
  static const Expr e(std::make_shared<const Node>(Node{NodeKind::VarT, 0.0, 0, {}}));
  return e;
}

Expr Expr::sum(std::vector<Expr> children) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Sum, 0.0, 0, std::move(children)}));
}

Expr Expr::product(std::vector<Expr> children) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Product, 0.0, 0, std::move(children)}));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent < 0) throw DomainError("negative exponent " + std::to_string(exponent));
  return Expr(std::make_shared<const Node>(Node{NodeKind::Power, 0.0, exponent, {std::move(base)}}));
}

Expr Expr::scale(double coefficient, Expr child) {
  require_finite(coefficient, "scale coefficient");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Scale, coefficient, 0, {std::move(child)}}));
}

Expr Expr::cos(Expr argument) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Cos, 0.0, 0, {std::move(argument)}}));
}

Expr Expr::sin(Expr argument) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Sin, 0.0, 0, {std::move(argument)}}));
}

Expr Expr::exp(Expr argument) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Exp, 0.0, 0, {std::move(argument)}}));
}

Expr Expr::reciprocal(Expr child) {
  if (!is_x_free(child)) throw DomainError("reciprocal of an x-dependent expression");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Reciprocal, 0.0, 0, {std::move(child)}}));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
int Expr::exponent() const noexcept { return node_->exponent; }
std::span<const Expr> Expr::children() const noexcept { return node_->children; }

const Expr& Expr::child() const {
  if (node_->children.size() != 1) throw DomainError("node has no single child");
  return node_->children.front();
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
  if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
  const auto ca = a.children();
  const auto cb = b.children();
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (const int c = compare(ca[i], cb[i]); c != 0) return c;
  }
  return 0;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& c : e.children()) n += node_count(c);
  return n;
}

bool contains_t(const Expr& e) {
  if (e.kind() == NodeKind::VarT) return true;
  return std::ranges::any_of(e.children(), [](const Expr& c) { return contains_t(c); });
}

bool is_x_free(const Expr& e) {
  if (e.kind() == NodeKind::VarX) return false;
  return std::ranges::all_of(e.children(), [](const Expr& c) { return is_x_free(c); });
}

bool is_closed_constant(const Expr& e) {
  if (e.kind() == NodeKind::VarT || e.kind() == NodeKind::VarX) return false;
  return std::ranges::all_of(e.children(), [](const Expr& c) { return is_closed_constant(c); });
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const Expr& e, double x, double t) {
  double v = 0.0;
  switch (e.kind()) {
    case NodeKind::Constant: return e.value();
    case NodeKind::VarX: return x;
    case NodeKind::VarT: return t;
    case NodeKind::Sum:
      for (const auto& c : e.children()) v += eval_node(c, x, t);
      break;
    case NodeKind::Product:
      v = 1.0;
      for (const auto& c : e.children()) v *= eval_node(c, x, t);
      break;
    case NodeKind::Power: {
      const double base = eval_node(e.child(), x, t);
      v = 1.0;
      for (int i = 0; i < e.exponent(); ++i) v *= base;
      break;
    }
    case NodeKind::Scale: v = e.value() * eval_node(e.child(), x, t); break;
    case NodeKind::Cos: v = std::cos(eval_node(e.child(), x, t)); break;
    case NodeKind::Sin: v = std::sin(eval_node(e.child(), x, t)); break;
    case NodeKind::Exp: v = std::exp(eval_node(e.child(), x, t)); break;
    case NodeKind::Reciprocal: {
      const double d = eval_node(e.child(), x, t);
      if (d == 0.0) throw NumericError("division by zero while evaluating expression");
      v = 1.0 / d;
      break;
    }
  }
  if (!std::isfinite(v)) throw NumericError("overflow while evaluating expression");
  return v;
}

}  // namespace

double evaluate(const Expr& e, double x, double t) {
  if (!std::isfinite(x) || !std::isfinite(t)) throw DomainError("evaluation point is not finite");
  return eval_node(e, x, t);
}

// ---------------------------------------------------------------------------
// Polynomial normal form: sums of c * x^m * prod(atom^p), atoms being
// cos(ax+b), sin(ax+b) with a > 0, and a single exp(ax) with a != 0.

namespace {

enum class AtomKind { Cos, Sin, Exp };

struct Atom {
  AtomKind kind;
  double frequency;
  double phase;
  auto operator<=>(const Atom&) const = default;
};

struct Monomial {
  int x_power = 0;
  std::vector<std::pair<Atom, int>> atoms;  // sorted by atom
  auto operator<=>(const Monomial&) const = default;
};

using Poly = std::map<Monomial, double>;

Poly poly_constant(double c) {
  Poly p;
  if (c != 0.0) p.emplace(Monomial{}, c);
  return p;
}

void accumulate(Poly& into, const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = into.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) into.erase(it);
  }
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.x_power = a.x_power + b.x_power;
  double exp_frequency = 0.0;
  std::map<Atom, int> atoms;
  for (const auto* m : {&a, &b}) {
    for (const auto& [atom, power] : m->atoms) {
      if (atom.kind == AtomKind::Exp) {
        exp_frequency += atom.frequency * power;
      } else {
        atoms[atom] += power;
      }
    }
  }
  if (exp_frequency != 0.0) atoms[Atom{AtomKind::Exp, exp_frequency, 0.0}] += 1;
  out.atoms.assign(atoms.begin(), atoms.end());
  return out;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      const double c = ca * cb;
      require_finite(c, "coefficient");
      accumulate(out, multiply(ma, mb), c);
    }
  }
  return out;
}

Poly power(const Poly& base, int n) {
  Poly out = poly_constant(1.0);
  for (int i = 0; i < n; ++i) out = multiply(out, base);
  return out;
}

Poly scaled(Poly p, double c) {
  if (c == 0.0) return {};
  for (auto& [m, v] : p) {
    v *= c;
    require_finite(v, "coefficient");
  }
  std::erase_if(p, [](const auto& kv) { return kv.second == 0.0; });
  return p;
}

bool is_constant_poly(const Poly& p) {
  return p.empty() || (p.size() == 1 && p.begin()->first == Monomial{});
}

double constant_of(const Poly& p) { return p.empty() ? 0.0 : p.begin()->second; }

// a*x + b, when p is linear in x with no atoms.
std::optional<std::pair<double, double>> as_linear(const Poly& p) {
  double a = 0.0;
  double b = 0.0;
  for (const auto& [m, c] : p) {
    if (!m.atoms.empty() || m.x_power > 1) return std::nullopt;
    (m.x_power == 1 ? a : b) = c;
  }
  return std::make_pair(a, b);
}

std::optional<Poly> atom_poly(NodeKind kind, const Poly& argument) {
  const auto linear = as_linear(argument);
  if (!linear) return std::nullopt;
  auto [a, b] = *linear;
  double sign = 1.0;
  Atom atom{};
  switch (kind) {
    case NodeKind::Cos:
      if (a == 0.0) return poly_constant(std::cos(b));
      if (a < 0.0) a = -a, b = -b;
      atom = Atom{AtomKind::Cos, a, b};
      break;
    case NodeKind::Sin:
      if (a == 0.0) return poly_constant(std::sin(b));
      if (a < 0.0) a = -a, b = -b, sign = -1.0;
      atom = Atom{AtomKind::Sin, a, b};
      break;
    case NodeKind::Exp: {
      const double eb = std::exp(b);
      if (!std::isfinite(eb) || eb == 0.0) return std::nullopt;
      if (a == 0.0) return poly_constant(eb);
      sign = eb;
      atom = Atom{AtomKind::Exp, a, 0.0};
      break;
    }
    default: return std::nullopt;
  }
  Poly p;
  p.emplace(Monomial{0, {{atom, 1}}}, sign);
  return p;
}

Expr atom_expr(const Atom& atom) {
  Expr arg = atom.frequency == 1.0 ? Expr::x() : Expr::scale(atom.frequency, Expr::x());
  if (atom.phase != 0.0) arg = Expr::sum({arg, Expr::constant(atom.phase)});
  switch (atom.kind) {
    case AtomKind::Cos: return Expr::cos(arg);
    case AtomKind::Sin: return Expr::sin(arg);
    case AtomKind::Exp: return Expr::exp(arg);
  }
  return arg;
}

Expr term_expr(const Monomial& m, double c) {
  std::vector<Expr> factors;
  if (m.x_power == 1) factors.push_back(Expr::x());
  if (m.x_power > 1) factors.push_back(Expr::power(Expr::x(), m.x_power));
  for (const auto& [atom, p] : m.atoms) {
    factors.push_back(p == 1 ? atom_expr(atom) : Expr::power(atom_expr(atom), p));
  }
  if (factors.empty()) return Expr::constant(c);
  Expr core = factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
  return c == 1.0 ? core : Expr::scale(c, core);
}

std::vector<Expr> poly_terms(const Poly& p) {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p) terms.push_back(term_expr(m, c));
  return terms;
}

Expr poly_expr(const Poly& p) {
  if (p.empty()) return Expr();
  auto terms = poly_terms(p);
  return terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
}

// ---------------------------------------------------------------------------
// Simplification

struct Simplified {
  std::optional<Poly> poly;
  std::optional<Expr> tree;

  const Expr& expr() {
    if (!tree) tree = poly_expr(*poly);
    return *tree;
  }
};

Simplified simp(const Expr& e);

Simplified from_poly(Poly p) { return Simplified{std::move(p), std::nullopt}; }
Simplified from_tree(Expr e) { return Simplified{std::nullopt, std::move(e)}; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

std::pair<double, Expr> split_scale(const Expr& e) {
  if (e.kind() == NodeKind::Scale) return {e.value(), e.child()};
  return {1.0, e};
}

Simplified simp_sum(const Expr& e) {
  std::vector<Simplified> parts;
  parts.reserve(e.children().size());
  bool all_poly = true;
  for (const auto& c : e.children()) {
    parts.push_back(simp(c));
    all_poly = all_poly && parts.back().poly.has_value();
  }
  Poly poly;
  if (all_poly) {
    for (const auto& p : parts) {
      for (const auto& [m, c] : *p.poly) accumulate(poly, m, c);
    }
    return from_poly(std::move(poly));
  }

  std::map<Expr, double, ExprLess> others;
  auto absorb = [&](const Expr& item) {
    auto [c, core] = split_scale(item);
    others[core] += c;
  };
  for (auto& part : parts) {
    if (part.poly) {
      for (const auto& [m, c] : *part.poly) accumulate(poly, m, c);
      continue;
    }
    const Expr& tree = part.expr();
    if (tree.kind() != NodeKind::Sum) {
      absorb(tree);
      continue;
    }
    for (const auto& grandchild : tree.children()) {
      auto inner = simp(grandchild);
      if (inner.poly) {
        for (const auto& [m, c] : *inner.poly) accumulate(poly, m, c);
      } else {
        absorb(inner.expr());
      }
    }
  }

  std::vector<Expr> terms = poly_terms(poly);
  for (const auto& [core, c] : others) {
    if (c == 0.0) continue;
    terms.push_back(c == 1.0 ? core : Expr::scale(c, core));
  }
  if (terms.empty()) return from_poly({});
  if (terms.size() == 1) return from_tree(terms.front());
  return from_tree(Expr::sum(std::move(terms)));
}

Simplified simp_product(const Expr& e) {
  std::vector<Simplified> parts;
  parts.reserve(e.children().size());
  bool all_poly = true;
  for (const auto& c : e.children()) {
    parts.push_back(simp(c));
    all_poly = all_poly && parts.back().poly.has_value();
  }
  Poly poly = poly_constant(1.0);
  if (all_poly) {
    for (const auto& p : parts) poly = multiply(poly, *p.poly);
    return from_poly(std::move(poly));
  }

  double coefficient = 1.0;
  std::map<Expr, int, ExprLess> others;
  auto absorb = [&](auto&& self, const Expr& item, int multiplicity) -> void {
    auto [c, core] = split_scale(item);
    for (int i = 0; i < multiplicity; ++i) coefficient *= c;
    require_finite(coefficient, "coefficient");
    if (core.kind() == NodeKind::Product) {
      for (const auto& factor : core.children()) {
        auto inner = simp(factor);
        if (inner.poly) {
          poly = multiply(poly, power(*inner.poly, multiplicity));
        } else {
          self(self, inner.expr(), multiplicity);
        }
      }
    } else if (core.kind() == NodeKind::Power) {
      others[core.child()] += core.exponent() * multiplicity;
    } else {
      others[core] += multiplicity;
    }
  };
  for (auto& part : parts) {
    if (part.poly) {
      poly = multiply(poly, *part.poly);
    } else {
      absorb(absorb, part.expr(), 1);
    }
  }
  if (poly.empty() || coefficient == 0.0) return from_poly({});
  if (is_constant_poly(poly)) {
    coefficient *= constant_of(poly);
    require_finite(coefficient, "coefficient");
    poly = poly_constant(1.0);
  }

  std::vector<Expr> factors;
  if (!is_constant_poly(poly)) factors.push_back(poly_expr(poly));
  for (const auto& [core, n] : others) {
    if (n == 0) continue;
    factors.push_back(n == 1 ? core : Expr::power(core, n));
  }
  Expr body = factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
  return from_tree(coefficient == 1.0 ? body : Expr::scale(coefficient, body));
}

Simplified simp_power(const Expr& e) {
  auto base = simp(e.child());
  const int n = e.exponent();
  if (base.poly) return from_poly(power(*base.poly, n));
  if (n == 0) return from_poly(poly_constant(1.0));
  const Expr& b = base.expr();
  if (n == 1) return from_tree(b);
  if (b.kind() == NodeKind::Power) return from_tree(Expr::power(b.child(), b.exponent() * n));
  if (b.kind() == NodeKind::Scale) {
    const double c = std::pow(b.value(), n);
    require_finite(c, "coefficient");
    return from_tree(Expr::scale(c, Expr::power(b.child(), n)));
  }
  return from_tree(Expr::power(b, n));
}

Simplified simp_scale(const Expr& e) {
  const double c = e.value();
  auto inner = simp(e.child());
  if (inner.poly) return from_poly(scaled(*inner.poly, c));
  if (c == 0.0) return from_poly({});
  const Expr& s = inner.expr();
  if (s.kind() == NodeKind::Scale) {
    const double merged = c * s.value();
    require_finite(merged, "coefficient");
    if (merged == 1.0) return from_tree(s.child());
    return from_tree(Expr::scale(merged, s.child()));
  }
  if (c == 1.0) return from_tree(s);
  return from_tree(Expr::scale(c, s));
}

Simplified simp_function(const Expr& e) {
  auto arg = simp(e.child());
  if (arg.poly) {
    if (auto p = atom_poly(e.kind(), *arg.poly)) return from_poly(std::move(*p));
  }
  const Expr& a = arg.expr();
  const Expr rebuilt = e.kind() == NodeKind::Cos   ? Expr::cos(a)
                       : e.kind() == NodeKind::Sin ? Expr::sin(a)
                                                   : Expr::exp(a);
  if (is_closed_constant(a)) return from_poly(poly_constant(evaluate(rebuilt, 0.0, 0.0)));
  return from_tree(rebuilt);
}

Simplified simp_reciprocal(const Expr& e) {
  auto inner = simp(e.child());
  if (inner.poly && is_constant_poly(*inner.poly)) {
    const double d = constant_of(*inner.poly);
    if (d == 0.0) throw NumericError("division by zero");
    return from_poly(poly_constant(1.0 / d));
  }
  const Expr& d = inner.expr();
  if (d.kind() == NodeKind::Scale) {
    return from_tree(Expr::scale(1.0 / d.value(), Expr::reciprocal(d.child())));
  }
  return from_tree(Expr::reciprocal(d));
}

Simplified simp(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant: return from_poly(poly_constant(e.value()));
    case NodeKind::VarX: {
      Poly p;
      p.emplace(Monomial{1, {}}, 1.0);
      return from_poly(std::move(p));
    }
    case NodeKind::VarT: return from_tree(e);
    case NodeKind::Sum: return simp_sum(e);
    case NodeKind::Product: return simp_product(e);
    case NodeKind::Power: return simp_power(e);
    case NodeKind::Scale: return simp_scale(e);
    case NodeKind::Cos:
    case NodeKind::Sin:
    case NodeKind::Exp: return simp_function(e);
    case NodeKind::Reciprocal: return simp_reciprocal(e);
  }
  return from_tree(e);
}

// ---------------------------------------------------------------------------
// Differentiation (raw tree; simplified by the public entry point)

Expr derivative(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::VarT: return Expr();
    case NodeKind::VarX: return Expr::constant(1.0);
    case NodeKind::Sum: {
      std::vector<Expr> terms;
      for (const auto& c : e.children()) terms.push_back(derivative(c));
      return Expr::sum(std::move(terms));
    }
    case NodeKind::Product: {
      const auto children = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < children.size(); ++i) {
        std::vector<Expr> factors(children.begin(), children.end());
        factors[i] = derivative(children[i]);
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case NodeKind::Power: {
      const int n = e.exponent();
      if (n == 0) return Expr();
      return Expr::scale(n, Expr::product({Expr::power(e.child(), n - 1), derivative(e.child())}));
    }
    case NodeKind::Scale: return Expr::scale(e.value(), derivative(e.child()));
    case NodeKind::Cos:
      return Expr::scale(-1.0, Expr::product({Expr::sin(e.child()), derivative(e.child())}));
    case NodeKind::Sin: return Expr::product({Expr::cos(e.child()), derivative(e.child())});
    case NodeKind::Exp: return Expr::product({e, derivative(e.child())});
    case NodeKind::Reciprocal:
      return Expr::scale(-1.0, Expr::product({derivative(e.child()), Expr::power(e, 2)}));
  }
  return Expr();
}

}  // namespace

Expr simplify(const Expr& e) { return simp(e).expr(); }

Expr differentiate_x(const Expr& e) { return simplify(derivative(e)); }

Expr expr_add(const Expr& a, const Expr& b) { return simplify(Expr::sum({a, b})); }

Expr expr_scale(double c, const Expr& a) {
  if (c == 0.0) return Expr();
  return simplify(Expr::scale(c, a));
}

Expr expr_mul(const Expr& a, const Expr& b) { return simplify(Expr::product({a, b})); }

std::optional<std::vector<BasisTerm>> as_basis_terms(const Expr& e) {
  if (contains_t(e)) return std::nullopt;
  auto s = simp(e);
  if (!s.poly) return std::nullopt;
  std::vector<BasisTerm> terms;
  for (const auto& [m, c] : *s.poly) {
    BasisTerm term{c, m.x_power, BasisTerm::Factor::None, 0.0, 0.0};
    if (m.atoms.size() > 1) return std::nullopt;
    if (m.atoms.size() == 1) {
      const auto& [atom, p] = m.atoms.front();
      if (p != 1) return std::nullopt;
      term.factor = atom.kind == AtomKind::Cos   ? BasisTerm::Factor::Cos
                    : atom.kind == AtomKind::Sin ? BasisTerm::Factor::Sin
                                                 : BasisTerm::Factor::Exp;
      term.frequency = atom.frequency;
      term.phase = atom.phase;
    }
    terms.push_back(term);
  }
  return terms;
}

// ---------------------------------------------------------------------------
// Printing

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

namespace {

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecPower = 3;
constexpr int kPrecAtom = 4;

std::pair<std::string, int> render(const Expr& e);

std::string print(const Expr& e, int min_prec) {
  auto [text, prec] = render(e);
  return prec < min_prec ? "(" + text + ")" : text;
}

bool is_negative(const Expr& e) {
  return (e.kind() == NodeKind::Constant || e.kind() == NodeKind::Scale) && e.value() < 0.0;
}

Expr negated(const Expr& e) {
  if (e.kind() == NodeKind::Constant) return Expr::constant(-e.value());
  if (e.value() == -1.0) return e.child();
  return Expr::scale(-e.value(), e.child());
}

std::pair<std::string, int> render(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
      if (e.value() < 0.0) return {"-" + format_number(-e.value()), kPrecSum};
      return {format_number(e.value()), kPrecAtom};
    case NodeKind::VarX: return {"x", kPrecAtom};
    case NodeKind::VarT: return {"t", kPrecAtom};
    case NodeKind::Sum: {
      const auto children = e.children();
      if (children.empty()) return {"0", kPrecAtom};
      std::string out = print(children.front(), kPrecSum);
      for (std::size_t i = 1; i < children.size(); ++i) {
        if (is_negative(children[i])) {
          out += " - " + print(negated(children[i]), kPrecProduct);
        } else {
          out += " + " + print(children[i], kPrecProduct);
        }
      }
      return {out, kPrecSum};
    }
    case NodeKind::Product: {
      const auto children = e.children();
      if (children.empty()) return {"1", kPrecAtom};
      std::string out;
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) out += "*";
        out += print(children[i], kPrecPower);
      }
      return {out, kPrecProduct};
    }
    case NodeKind::Power:
      return {print(e.child(), kPrecAtom) + "^" + std::to_string(e.exponent()), kPrecPower};
    case NodeKind::Scale: {
      const double c = e.value();
      if (c == -1.0) return {"-" + print(e.child(), kPrecPower), kPrecSum};
      if (c < 0.0) return {"-" + format_number(-c) + "*" + print(e.child(), kPrecPower), kPrecSum};
      return {format_number(c) + "*" + print(e.child(), kPrecPower), kPrecProduct};
    }
    case NodeKind::Cos: return {"cos(" + print(e.child(), 0) + ")", kPrecAtom};
    case NodeKind::Sin: return {"sin(" + print(e.child(), 0) + ")", kPrecAtom};
    case NodeKind::Exp: return {"exp(" + print(e.child(), 0) + ")", kPrecAtom};
    case NodeKind::Reciprocal: return {"1/" + print(e.child(), kPrecAtom), kPrecProduct};
  }
  return {"", kPrecAtom};
}

}  // namespace

std::string to_string(const Expr& e) { return print(e, 0); }

}  // namespace rdtm
