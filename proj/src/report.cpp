#include "rdtm/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "rdtm/error.hpp"

namespace rdtm {

void SamplePlan::validate(double horizon) const {
  if (xs.empty() || ts.empty()) throw DomainError("sample plan needs at least one x and one t");
  if (!std::ranges::is_sorted(xs) || !std::ranges::is_sorted(ts)) {
    throw DomainError("sample points must be sorted ascending");
  }
  for (double x : xs) {
    if (!std::isfinite(x)) throw DomainError("sample x is not finite");
  }
  for (double t : ts) {
    if (!(t >= 0.0 && t <= horizon)) {
      throw DomainError("sample t = " + format_number(t) + " is outside [0, " + format_number(horizon) + "]");
    }
  }
}

SamplePlan SamplePlan::quarter_grid() { return {{0.25, 0.5, 0.75, 1.0}, {0.25, 0.5, 0.75, 1.0}}; }

std::vector<TableRow> build_table(const PiecewiseSolution& solution, const Expr& exact, const SamplePlan& plan) {
  plan.validate(solution.grid.horizon);
  std::vector<TableRow> rows;
  rows.reserve(plan.xs.size() * plan.ts.size());
  for (double x : plan.xs) {
    for (double t : plan.ts) {
      TableRow row{x, t, eval_solution(solution, x, t), evaluate(exact, x, t), 0.0};
      row.abs_error = std::abs(row.approx - row.exact);
      rows.push_back(row);
    }
  }
  return rows;
}

double max_abs_error(const std::vector<TableRow>& rows) {
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row.abs_error);
  return worst;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("slope fit needs at least two points");
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

ConvergenceResult convergence_study(const PdeSpec& pde, const Expr& f, const Expr& exact, const std::vector<int>& Ns,
                                    int order, const SamplePlan& plan, double horizon, std::size_t node_cap) {
  if (Ns.size() < 2) throw DomainError("convergence study needs at least two values of N");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1) throw DomainError("N must be at least 1");
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw DomainError("N values must be strictly increasing");
  }
  plan.validate(horizon);

  struct Outcome {
    double max_error;
    double max_exact;
  };
  std::vector<std::future<Outcome>> jobs;
  jobs.reserve(Ns.size());
  for (int N : Ns) {
    jobs.push_back(std::async(std::launch::async, [&, N] {
      const auto solution = solve(pde, f, horizon, N, SolveOptions{order, node_cap});
      const auto rows = build_table(solution, exact, plan);
      double max_exact = 0.0;
      for (const auto& row : rows) max_exact = std::max(max_exact, std::abs(row.exact));
      return Outcome{max_abs_error(rows), max_exact};
    }));
  }

  ConvergenceResult result;
  result.Ns = Ns;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const Outcome outcome = jobs[i].get();
    result.steps.push_back(horizon / Ns[i]);
    result.max_errors.push_back(outcome.max_error);
    magnitude = std::max(magnitude, outcome.max_exact);
  }

  const double rounding_floor = 1000.0 * std::numeric_limits<double>::epsilon() * (1.0 + magnitude);
  if (std::ranges::all_of(result.max_errors, [&](double e) { return e > rounding_floor; })) {
    std::vector<double> log_h;
    std::vector<double> log_e;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      log_h.push_back(std::log(result.steps[i]));
      log_e.push_back(std::log(result.max_errors[i]));
    }
    result.estimated_order = least_squares_slope(log_h, log_e);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Output

void emit_csv(const std::vector<TableRow>& rows, std::ostream& out) {
  out << kTableHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.t) << ',' << format_number(r.approx) << ','
        << format_number(r.exact) << ',' << format_number(r.abs_error) << '\n';
  }
}

void emit_csv(const std::vector<TableRow>& rows, const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { emit_csv(rows, out); });
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw DomainError("plot resolution must be at least 1");
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) v[i] = lo + i * step;
  v.back() = hi;
  return v;
}

}  // namespace

void emit_plot_data(const PiecewiseSolution& solution, const std::optional<Expr>& exact, int x_resolution,
                    int t_resolution, std::ostream& out, double x_min, double x_max) {
  const auto xs = linspace(x_min, x_max, x_resolution);
  const auto ts = linspace(0.0, solution.grid.horizon, t_resolution);
  // Evaluate everything before writing so errors leave the stream untouched.
  std::string buffer;
  buffer += exact ? kTableHeader : "x,t,approx";
  buffer += '\n';
  for (double x : xs) {
    for (double t : ts) {
      const double approx = eval_solution(solution, x, t);
      buffer += format_number(x) + ',' + format_number(t) + ',' + format_number(approx);
      if (exact) {
        const double e = evaluate(*exact, x, t);
        buffer += ',' + format_number(e) + ',' + format_number(std::abs(approx - e));
      }
      buffer += '\n';
    }
  }
  out << buffer;
}

void emit_plot_data(const PiecewiseSolution& solution, const std::optional<Expr>& exact, int x_resolution,
                    int t_resolution, const std::filesystem::path& path, double x_min, double x_max) {
  write_file_atomically(path, [&](std::ostream& out) {
    emit_plot_data(solution, exact, x_resolution, t_resolution, out, x_min, x_max);
  });
}

void emit_convergence_csv(const ConvergenceResult& result, std::ostream& out) {
  out << "N,h,max_error\n";
  for (std::size_t i = 0; i < result.Ns.size(); ++i) {
    out << result.Ns[i] << ',' << format_number(result.steps[i]) << ',' << format_number(result.max_errors[i])
        << '\n';
  }
}

std::vector<TableRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) throw ParseError("missing CSV header", 0);
  std::vector<TableRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    double fields[5];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 5; ++i) {
      const auto [ptr, ec] = std::from_chars(p, end, fields[i]);
      if (ec != std::errc()) throw ParseError("bad number on CSV line " + std::to_string(line_number), p - line.data());
      p = ptr;
      if (i < 4) {
        if (p == end || *p != ',') throw ParseError("expected ',' on CSV line " + std::to_string(line_number), p - line.data());
        ++p;
      }
    }
    if (p != end) throw ParseError("trailing data on CSV line " + std::to_string(line_number), p - line.data());
    rows.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
  }
  return rows;
}

void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path temp = path;
  temp += ".partial";
  try {
    {
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open " + temp.string() + " for writing");
      writer(out);
      out.flush();
      if (!out) throw IoError("failed writing " + temp.string());
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    throw;
  }
}

}  // namespace rdtm
