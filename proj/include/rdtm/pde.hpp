#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdtm/expr.hpp"

namespace rdtm {

/// Spectra U_0(x), U_1(x), ... of one expansion; every entry is t-free.
using Spectra = std::vector<Expr>;

/// Default cap on the node count of any computed spectrum.
inline constexpr std::size_t kDefaultNodeCap = 10000;

/// One right-hand-side term of u^(r)_t = sum of terms.
///
/// A regular term is  coefficient * x^m * t^n * prod_j d^{p_j}u/dx^{p_j};
/// a forcing term is  coefficient * x^m * g(x) * t^n.
struct PdeTerm {
  double coefficient = 1.0;
  int x_power = 0;
  int t_power = 0;
  std::vector<int> derivative_orders;
  std::optional<Expr> forcing;

  bool is_forcing() const noexcept { return forcing.has_value(); }

  static PdeTerm product(double coefficient, std::vector<int> derivative_orders, int x_power = 0,
                         int t_power = 0);
  static PdeTerm source(double coefficient, Expr g, int t_power = 0, int x_power = 0);
};

struct PdeSpec {
  int time_order = 1;
  std::vector<PdeTerm> rhs_terms;

  /// Throws DomainError when an invariant is broken.
  void validate() const;
};

struct BuiltinProblem {
  std::string name;
  PdeSpec pde;
  Expr initial;
  Expr exact;
};

/// "heat": u_t = u_xx, u(x,0) = cos(pi x / 2).
/// "burgers": u_t = -u u_x + u_xx, u(x,0) = x.
BuiltinProblem builtin_pde(std::string_view name);

/// Parses the term DSL, e.g. "-1 * u * dx(u) + 1 * dx(u,2)" or "2 * sin(x) * t^3".
/// Factors: numbers, x^m, t^n, u, dx(u), dx(u,p); any other t-free expression
/// factor makes the term a forcing term (which must contain no u factor).
PdeSpec parse_terms(std::string_view text);

/// Prints a first-order spec back in the term DSL.
std::string to_string(const PdeSpec& pde);

// Transform rules ------------------------------------------------------------

/// sum_{r=0}^{k} U_r V_{k-r}, simplified.
Expr convolve(std::span<const Expr> u, std::span<const Expr> v, std::size_t k);

/// Left-to-right iterated convolution of the factor spectra at index k.
Expr multi_convolve(std::span<const Spectra> factors, std::size_t k);

/// g when k == n, otherwise 0.
Expr transform_forcing(const Expr& g, int n, std::size_t k);

/// x^m U_{k-n} when k >= n, otherwise 0.
Expr transform_shifted(int m, int n, std::span<const Expr> u, std::size_t k);

/// (k + r)! / k!. Throws NumericError when the result is not exactly representable.
double time_shift_factor(std::size_t k, int r);

/// Next spectrum: given U_0..U_{L-1} (L >= r), returns U_L from the
/// recurrence at index k = L - r.
Expr advance(const PdeSpec& pde, std::span<const Expr> spectra, std::size_t node_cap = kDefaultNodeCap);

/// Incremental spectrum generator for one expansion. Keeps computed spectra
/// and their x-derivatives so each advance reuses the lower orders.
class SpectrumBuilder {
 public:
  /// `initial` holds U_0..U_{r-1} (at least time_order entries).
  SpectrumBuilder(PdeSpec pde, Spectra initial, std::size_t node_cap = kDefaultNodeCap);

  /// Computes (if needed) and returns U_k.
  Expr spectrum(std::size_t k);
  const Spectra& spectra() const noexcept { return spectra_; }

 private:
  Expr derivative(std::size_t index, int order);
  Expr next();

  PdeSpec pde_;
  Spectra spectra_;
  std::size_t node_cap_;
  std::vector<Spectra> derivatives_;  // derivatives_[p][j] = d^p U_j / dx^p
};

}  // namespace rdtm
