#pragma once

#include <cstddef>
#include <vector>

#include "rdtm/expr.hpp"
#include "rdtm/pde.hpp"

namespace rdtm {

/// Uniform partition of [0, T] into N subintervals.
struct Grid {
  double horizon = 1.0;
  int intervals = 1;
  double step = 1.0;
  std::vector<double> knots;  // t_0 = 0 < t_1 < ... < t_N = T
};

/// Throws DomainError unless T > 0 (finite) and N >= 1.
Grid make_grid(double horizon, int intervals);

/// Truncated Taylor expansion u(x, t) ~ sum_j coeffs[j](x) (t - base)^j.
struct TaylorPiece {
  double base = 0.0;
  Spectra coeffs;

  int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

struct SolveOptions {
  int order = 5;
  std::size_t node_cap = kDefaultNodeCap;
};

/// Pieces are ordered by base; piece i covers (t_i, t_{i+1}], piece 0 also covers t = 0.
struct PiecewiseSolution {
  Grid grid;
  std::vector<TaylorPiece> pieces;

  /// Index of the piece covering t. Throws DomainError outside [0, T].
  std::size_t piece_index(double t) const;
};

/// Order-n expansion about `base` from the first r spectra (r = time order).
TaylorPiece solve_subdomain(const PdeSpec& pde, Spectra initial, double base, int order,
                            std::size_t node_cap = kDefaultNodeCap);
TaylorPiece solve_subdomain(const PdeSpec& pde, const Expr& u0, double base, int order,
                            std::size_t node_cap = kDefaultNodeCap);

/// Horner evaluation, highest coefficient first.
double evaluate_piece(const TaylorPiece& piece, double x, double t);

/// The piece's value at t_next as a spatial expression: sum_j U_j h^j, h = t_next - base.
Expr restart_condition(const TaylorPiece& piece, double t_next);

/// Re-expands the piece about another base point; coefficient j becomes the
/// j-th Taylor coefficient at `new_base`. Used for higher time orders, where
/// the first r coefficients seed the next piece, and to express a piece in
/// powers of t (new_base = 0).
TaylorPiece rebase_piece(const TaylorPiece& piece, double new_base);

/// Fixed-grid multi-step solve. Piece 0 starts from `initial`; piece i + 1
/// restarts from the truncated value of piece i at t_{i+1}.
/// A NodeCapError raised while solving carries the subdomain index.
PiecewiseSolution solve(const PdeSpec& pde, const Spectra& initial, double horizon, int intervals,
                        const SolveOptions& options = {});
PiecewiseSolution solve(const PdeSpec& pde, const Expr& f, double horizon, int intervals,
                        const SolveOptions& options = {});

double eval_solution(const PiecewiseSolution& solution, double x, double t);

}  // namespace rdtm
