#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdtm {

enum class NodeKind { Constant, VarX, VarT, Sum, Product, Power, Scale, Cos, Sin, Exp, Reciprocal };

/// Immutable closed-form expression over x and t.
///
/// Nodes are shared between trees; copying an Expr is a reference-count bump.
/// The factory functions build exactly the node requested (no folding); use
/// simplify() or the expr_* helpers to get normalized results.
class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr x();
  static Expr t();
  static Expr sum(std::vector<Expr> children);
  static Expr product(std::vector<Expr> children);
  static Expr power(Expr base, int exponent);
  static Expr scale(double coefficient, Expr child);
  static Expr cos(Expr argument);
  static Expr sin(Expr argument);
  static Expr exp(Expr argument);
  /// 1 / child. Only x-free divisors are accepted (exact solutions such as x/(1+t)).
  static Expr reciprocal(Expr child);

  NodeKind kind() const noexcept;
  /// Constant value, or the coefficient of a Scale node. Zero for other kinds.
  double value() const noexcept;
  /// Exponent of a Power node. Zero for other kinds.
  int exponent() const noexcept;
  std::span<const Expr> children() const noexcept;
  /// Single child of Power/Scale/Cos/Sin/Exp/Reciprocal.
  const Expr& child() const;

  bool is_constant() const noexcept { return kind() == NodeKind::Constant; }
  bool is_zero() const noexcept { return is_constant() && value() == 0.0; }

  /// Deep structural equality (coefficients compared exactly).
  friend bool operator==(const Expr& a, const Expr& b);
  friend int compare(const Expr& a, const Expr& b);

  struct Node;  // opaque

 private:
  explicit Expr(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

/// Total ordering on trees, used for canonical ordering inside sums and products.
int compare(const Expr& a, const Expr& b);

std::size_t node_count(const Expr& e);
bool contains_t(const Expr& e);
bool is_x_free(const Expr& e);
/// True when the tree references neither x nor t.
bool is_closed_constant(const Expr& e);

/// Numeric value at (x, t). Throws NumericError when any intermediate value is not finite.
double evaluate(const Expr& e, double x, double t = 0.0);

/// Exact derivative with respect to x (t is held constant); the result is simplified.
Expr differentiate_x(const Expr& e);

/// Value-preserving normalization.
///
/// Trees that are polynomials in x and in the atoms cos(ax+b), sin(ax+b),
/// exp(ax) collapse to a canonical sum of terms c * x^m * atom^p * ...;
/// anything else gets constant folding, flattening, scale merging and
/// like-term collection.
Expr simplify(const Expr& e);

Expr expr_add(const Expr& a, const Expr& b);
Expr expr_scale(double c, const Expr& a);
Expr expr_mul(const Expr& a, const Expr& b);

/// One term c * x^m * {1 | cos(ax+b) | sin(ax+b) | exp(ax)}.
struct BasisTerm {
  enum class Factor { None, Cos, Sin, Exp };

  double coefficient = 0.0;
  int power = 0;
  Factor factor = Factor::None;
  double frequency = 0.0;
  double phase = 0.0;
};

/// Decomposes a spatial expression into basis terms, or nullopt when it
/// references t or needs more than one transcendental factor per term.
std::optional<std::vector<BasisTerm>> as_basis_terms(const Expr& e);

/// Prints in the parser grammar. Coefficients carry 17 significant digits.
std::string to_string(const Expr& e);

/// Locale-independent formatting with 17 significant digits (round-trips exactly).
std::string format_number(double value);

}  // namespace rdtm
