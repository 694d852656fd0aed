#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdtm/error.hpp"
#include "rdtm/expr.hpp"
#include "rdtm/pde.hpp"
#include "rdtm/report.hpp"

namespace rdtm::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Command { Solve, Errors, Converge };
enum class OutputFormat { Csv, PlotGrid };

/// Raw, unvalidated settings; unset fields fall back to the next layer.
struct RunConfig {
  std::optional<std::string> pde;
  std::optional<std::string> terms;
  std::optional<std::string> initial;
  std::optional<std::string> exact;
  std::optional<std::string> T;
  std::optional<std::string> N;
  std::optional<std::string> Ns;
  std::optional<std::string> order;
  std::optional<std::string> xs;
  std::optional<std::string> ts;
  std::optional<std::string> output;
  std::optional<std::string> format;

  /// Fields set here win; unset ones are taken from `lower`.
  RunConfig overlay(const RunConfig& lower) const;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
RunConfig parse_config_text(std::string_view text);
RunConfig read_config_file(const std::filesystem::path& path);

inline constexpr int kPlotResolution = 51;

struct ResolvedRun {
  std::string problem;  // builtin name or "custom"
  PdeSpec pde;
  Expr initial;
  std::optional<Expr> exact;
  double horizon = 1.0;
  int intervals = 5;
  std::vector<int> Ns{4, 16};
  int order = 5;
  SamplePlan plan = SamplePlan::quarter_grid();
  std::optional<std::filesystem::path> output;
  std::optional<OutputFormat> format;
};

/// Applies defaults and validates everything. Throws ConfigError, ParseError or DomainError.
ResolvedRun resolve(const RunConfig& config);

Command parse_command(std::string_view name);

/// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O failure.
int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rdtm::cli
