#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rdtm/expr.hpp"
#include "rdtm/gridstep.hpp"
#include "rdtm/pde.hpp"

namespace rdtm {

struct SamplePlan {
  std::vector<double> xs;
  std::vector<double> ts;

  /// Non-empty, sorted ascending, every t inside [0, horizon]. Throws DomainError.
  void validate(double horizon) const;

  /// x, t in {0.25, 0.5, 0.75, 1}.
  static SamplePlan quarter_grid();
};

struct TableRow {
  double x = 0.0;
  double t = 0.0;
  double approx = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
};

/// Rows in x-major order, then t.
std::vector<TableRow> build_table(const PiecewiseSolution& solution, const Expr& exact, const SamplePlan& plan);

double max_abs_error(const std::vector<TableRow>& rows);

struct ConvergenceResult {
  std::vector<int> Ns;
  std::vector<double> steps;
  std::vector<double> max_errors;
  /// Least-squares slope of log(max error) against log(h); empty when any
  /// error is at rounding level and the fit would be meaningless.
  std::optional<double> estimated_order;
};

/// One solve per N (run concurrently), max abs error over the plan, slope fit.
ConvergenceResult convergence_study(const PdeSpec& pde, const Expr& f, const Expr& exact, const std::vector<int>& Ns,
                                    int order, const SamplePlan& plan, double horizon = 1.0,
                                    std::size_t node_cap = kDefaultNodeCap);

/// Least-squares slope of ys against xs.
double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Output ---------------------------------------------------------------------

inline constexpr const char* kTableHeader = "x,t,approx,exact,abs_error";

void emit_csv(const std::vector<TableRow>& rows, std::ostream& out);
void emit_csv(const std::vector<TableRow>& rows, const std::filesystem::path& path);

/// Dense (x, t) grid over [x_min, x_max] x [0, T] with `x_resolution` by
/// `t_resolution` points. Without an exact solution only x,t,approx are written.
void emit_plot_data(const PiecewiseSolution& solution, const std::optional<Expr>& exact, int x_resolution,
                    int t_resolution, std::ostream& out, double x_min = 0.0, double x_max = 1.0);
void emit_plot_data(const PiecewiseSolution& solution, const std::optional<Expr>& exact, int x_resolution,
                    int t_resolution, const std::filesystem::path& path, double x_min = 0.0, double x_max = 1.0);

/// Columns N,h,max_error.
void emit_convergence_csv(const ConvergenceResult& result, std::ostream& out);

/// Parses a file written by emit_csv. Throws ParseError on malformed input.
std::vector<TableRow> read_csv(std::istream& in);

/// Writes through a temporary sibling file and renames it into place, so a
/// failure never leaves a partial file at `path`. Throws IoError.
void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

}  // namespace rdtm
