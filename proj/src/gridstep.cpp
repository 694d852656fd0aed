#include "rdtm/gridstep.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rdtm/error.hpp"

namespace rdtm {

Grid make_grid(double horizon, int intervals) {
  if (!std::isfinite(horizon) || horizon <= 0.0) throw DomainError("horizon T must be positive");
  if (intervals < 1) throw DomainError("subinterval count N must be at least 1");
  Grid grid;
  grid.horizon = horizon;
  grid.intervals = intervals;
  grid.step = horizon / intervals;
  grid.knots.resize(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i < intervals; ++i) grid.knots[i] = i * grid.step;
  grid.knots.back() = horizon;
  for (std::size_t i = 1; i < grid.knots.size(); ++i) {
    if (!(grid.knots[i] > grid.knots[i - 1])) throw DomainError("grid knots are not strictly increasing");
  }
  return grid;
}

std::size_t PiecewiseSolution::piece_index(double t) const {
  if (!std::isfinite(t) || t < 0.0 || t > grid.horizon) {
    throw DomainError("t = " + format_number(t) + " is outside [0, " + format_number(grid.horizon) + "]");
  }
  const auto it = std::lower_bound(grid.knots.begin() + 1, grid.knots.end(), t);
  return static_cast<std::size_t>(it - grid.knots.begin()) - 1;
}

TaylorPiece solve_subdomain(const PdeSpec& pde, Spectra initial, double base, int order, std::size_t node_cap) {
  if (order < 1) throw DomainError("expansion order must be at least 1");
  if (initial.size() > static_cast<std::size_t>(order) + 1) {
    throw DomainError("expansion order is too small for the time order");
  }
  SpectrumBuilder builder(pde, std::move(initial), node_cap);
  builder.spectrum(static_cast<std::size_t>(order));
  TaylorPiece piece;
  piece.base = base;
  piece.coeffs.assign(builder.spectra().begin(), builder.spectra().begin() + order + 1);
  return piece;
}

TaylorPiece solve_subdomain(const PdeSpec& pde, const Expr& u0, double base, int order, std::size_t node_cap) {
  return solve_subdomain(pde, Spectra{u0}, base, order, node_cap);
}

double evaluate_piece(const TaylorPiece& piece, double x, double t) {
  if (piece.coeffs.empty()) return 0.0;
  const double dt = t - piece.base;
  double value = evaluate(piece.coeffs.back(), x, t);
  for (std::size_t j = piece.coeffs.size() - 1; j-- > 0;) {
    value = value * dt + evaluate(piece.coeffs[j], x, t);
  }
  if (!std::isfinite(value)) throw NumericError("overflow while evaluating a Taylor piece");
  return value;
}

Expr restart_condition(const TaylorPiece& piece, double t_next) {
  const double h = t_next - piece.base;
  if (h == 0.0) return piece.coeffs.front();
  std::vector<Expr> terms{piece.coeffs.front()};
  double h_power = 1.0;
  for (std::size_t j = 1; j < piece.coeffs.size(); ++j) {
    h_power *= h;
    if (!piece.coeffs[j].is_zero()) terms.push_back(Expr::scale(h_power, piece.coeffs[j]));
  }
  // A stationary piece hands its initial value on untouched.
  if (terms.size() == 1) return terms.front();
  return simplify(Expr::sum(std::move(terms)));
}

TaylorPiece rebase_piece(const TaylorPiece& piece, double new_base) {
  const double d = new_base - piece.base;
  const std::size_t n = piece.coeffs.size();
  TaylorPiece out;
  out.base = new_base;
  out.coeffs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Expr> terms;
    double binomial = 1.0;  // C(l, j)
    double d_power = 1.0;   // d^(l - j)
    for (std::size_t l = j; l < n; ++l) {
      if (l > j) {
        binomial = binomial * static_cast<double>(l) / static_cast<double>(l - j);
        d_power *= d;
      }
      terms.push_back(Expr::scale(binomial * d_power, piece.coeffs[l]));
    }
    out.coeffs.push_back(simplify(Expr::sum(std::move(terms))));
  }
  return out;
}

PiecewiseSolution solve(const PdeSpec& pde, const Spectra& initial, double horizon, int intervals,
                        const SolveOptions& options) {
  pde.validate();
  PiecewiseSolution solution;
  solution.grid = make_grid(horizon, intervals);
  solution.pieces.reserve(static_cast<std::size_t>(intervals));
  const auto r = static_cast<std::size_t>(pde.time_order);

  Spectra start = initial;
  for (int i = 0; i < intervals; ++i) {
    try {
      solution.pieces.push_back(
          solve_subdomain(pde, std::move(start), solution.grid.knots[i], options.order, options.node_cap));
      const TaylorPiece& piece = solution.pieces.back();
      const double t_next = solution.grid.knots[i + 1];
      if (r == 1) {
        start = Spectra{restart_condition(piece, t_next)};
      } else {
        const TaylorPiece shifted = rebase_piece(piece, t_next);
        start.assign(shifted.coeffs.begin(), shifted.coeffs.begin() + static_cast<std::ptrdiff_t>(r));
      }
    } catch (const NodeCapError& err) {
      throw err.in_subdomain(i);
    }
  }
  return solution;
}

PiecewiseSolution solve(const PdeSpec& pde, const Expr& f, double horizon, int intervals,
                        const SolveOptions& options) {
  return solve(pde, Spectra{f}, horizon, intervals, options);
}

double eval_solution(const PiecewiseSolution& solution, double x, double t) {
  return evaluate_piece(solution.pieces.at(solution.piece_index(t)), x, t);
}

}  // namespace rdtm
