#include "rdtm/cli.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "rdtm/gridstep.hpp"
#include "rdtm/parse.hpp"

namespace rdtm::cli {

RunConfig RunConfig::overlay(const RunConfig& lower) const {
  RunConfig merged = *this;
  auto pick = [](std::optional<std::string>& mine, const std::optional<std::string>& theirs) {
    if (!mine) mine = theirs;
  };
  pick(merged.pde, lower.pde);
  pick(merged.terms, lower.terms);
  pick(merged.initial, lower.initial);
  pick(merged.exact, lower.exact);
  pick(merged.T, lower.T);
  pick(merged.N, lower.N);
  pick(merged.Ns, lower.Ns);
  pick(merged.order, lower.order);
  pick(merged.xs, lower.xs);
  pick(merged.ts, lower.ts);
  pick(merged.output, lower.output);
  pick(merged.format, lower.format);
  return merged;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<std::string>* field(RunConfig& c, std::string_view key) {
  if (key == "pde") return &c.pde;
  if (key == "terms") return &c.terms;
  if (key == "initial") return &c.initial;
  if (key == "exact") return &c.exact;
  if (key == "T") return &c.T;
  if (key == "N") return &c.N;
  if (key == "Ns") return &c.Ns;
  if (key == "order") return &c.order;
  if (key == "xs") return &c.xs;
  if (key == "ts") return &c.ts;
  if (key == "output") return &c.output;
  if (key == "format") return &c.format;
  return nullptr;
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not a real number");
  }
  return v;
}

int parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not an integer");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view key, std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (item.empty()) throw ConfigError(std::string(key) + ": empty list entry");
    items.push_back(item);
    if (comma == std::string_view::npos) return items;
    start = comma + 1;
  }
}

std::vector<double> parse_reals(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_commas(key, text)) out.push_back(parse_real(key, item));
  return out;
}

Expr parse_field_expr(std::string_view key, const std::string& text) {
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config_text(std::string_view text) {
  RunConfig config;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    auto* slot = field(config, key);
    if (!slot) throw ConfigError("config line " + std::to_string(line_number) + ": unknown key '" + std::string(key) + "'");
    *slot = std::string(trim(line.substr(eq + 1)));
  }
  return config;
}

RunConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

ResolvedRun resolve(const RunConfig& config) {
  ResolvedRun run;

  if (config.terms) {
    run.problem = "custom";
    try {
      run.pde = parse_terms(*config.terms);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("terms: ") + e.what());
    }
    if (!config.initial) throw ConfigError("initial: required for a custom PDE");
    run.initial = parse_field_expr("initial", *config.initial);
  } else {
    const std::string name = config.pde.value_or("heat");
    BuiltinProblem builtin;
    try {
      builtin = builtin_pde(name);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("pde: ") + e.what());
    }
    run.problem = builtin.name;
    run.pde = builtin.pde;
    run.initial = config.initial ? parse_field_expr("initial", *config.initial) : builtin.initial;
    if (!config.initial) run.exact = builtin.exact;
  }
  if (contains_t(run.initial)) throw ConfigError("initial: must not depend on t");
  if (config.exact) run.exact = parse_field_expr("exact", *config.exact);

  if (config.T) run.horizon = parse_real("T", *config.T);
  if (!(run.horizon > 0.0)) throw ConfigError("T: must be positive");
  if (config.N) run.intervals = parse_integer("N", *config.N);
  if (run.intervals < 1) throw ConfigError("N: must be at least 1");
  if (config.order) run.order = parse_integer("order", *config.order);
  if (run.order < 1) throw ConfigError("order: must be at least 1");
  if (config.Ns) {
    run.Ns.clear();
    for (auto item : split_commas("Ns", *config.Ns)) run.Ns.push_back(parse_integer("Ns", item));
  }
  if (run.Ns.size() < 2) throw ConfigError("Ns: need at least two values");
  for (std::size_t i = 0; i < run.Ns.size(); ++i) {
    if (run.Ns[i] < 1 || (i > 0 && run.Ns[i] <= run.Ns[i - 1])) {
      throw ConfigError("Ns: values must be positive and strictly increasing");
    }
  }
  if (config.xs) run.plan.xs = parse_reals("xs", *config.xs);
  if (config.ts) run.plan.ts = parse_reals("ts", *config.ts);
  try {
    run.plan.validate(run.horizon);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sample plan: ") + e.what());
  }
  if (config.output && !config.output->empty()) run.output = *config.output;
  if (config.format) {
    if (*config.format == "csv") {
      run.format = OutputFormat::Csv;
    } else if (*config.format == "plotgrid") {
      run.format = OutputFormat::PlotGrid;
    } else {
      throw ConfigError("format: expected csv or plotgrid, got '" + *config.format + "'");
    }
  }
  return run;
}

Command parse_command(std::string_view name) {
  if (name == "solve") return Command::Solve;
  if (name == "errors") return Command::Errors;
  if (name == "converge") return Command::Converge;
  throw ConfigError("unknown command '" + std::string(name) + "' (expected solve, errors or converge)");
}

namespace {

void emit_values(const PiecewiseSolution& solution, const SamplePlan& plan, std::ostream& out) {
  std::string buffer = "x,t,approx\n";
  for (double x : plan.xs) {
    for (double t : plan.ts) {
      buffer += format_number(x) + ',' + format_number(t) + ',' + format_number(eval_solution(solution, x, t)) + '\n';
    }
  }
  out << buffer;
}

void write_output(const ResolvedRun& run, std::ostream& out, const std::function<void(std::ostream&)>& writer) {
  if (run.output) {
    write_file_atomically(*run.output, writer);
  } else {
    std::ostringstream buffer;
    writer(buffer);
    out << buffer.str();
  }
}

int execute(Command command, const ResolvedRun& run, std::ostream& out) {
  if (command != Command::Solve && !run.exact) {
    throw ConfigError("exact: an exact solution is required for this command");
  }
  const SolveOptions options{run.order, kDefaultNodeCap};

  if (command == Command::Converge) {
    const auto result =
        convergence_study(run.pde, run.initial, *run.exact, run.Ns, run.order, run.plan, run.horizon);
    write_output(run, out, [&](std::ostream& os) { emit_convergence_csv(result, os); });
    if (result.estimated_order) {
      out << "estimated order: " << format_number(*result.estimated_order) << '\n';
    } else {
      out << "estimated order: n/a (errors at rounding level)\n";
    }
    return 0;
  }

  const auto solution = solve(run.pde, run.initial, run.horizon, run.intervals, options);
  const OutputFormat format =
      run.format.value_or(command == Command::Solve ? OutputFormat::PlotGrid : OutputFormat::Csv);
  if (format == OutputFormat::PlotGrid) {
    std::ostringstream data;
    emit_plot_data(solution, run.exact, kPlotResolution, kPlotResolution, data);
    write_output(run, out, [&](std::ostream& os) { os << data.str(); });
  } else if (run.exact) {
    const auto rows = build_table(solution, *run.exact, run.plan);
    write_output(run, out, [&](std::ostream& os) { emit_csv(rows, os); });
  } else {
    std::ostringstream data;
    emit_values(solution, run.plan, data);
    write_output(run, out, [&](std::ostream& os) { os << data.str(); });
  }
  return 0;
}

}  // namespace

int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return execute(command, resolve(config), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace rdtm::cli
