// Command-line driver: rdtm <solve|errors|converge> [options]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rdtm/cli.hpp"

int main(int argc, char** argv) {
  using namespace rdtm::cli;

  CLI::App app{"Fixed-grid reduced differential transform solver"};
  std::string command;
  std::optional<std::string> config_path;
  RunConfig flags;

  app.add_option("command", command, "solve | errors | converge")->required();
  app.add_option("--pde", flags.pde, "built-in problem: heat | burgers");
  app.add_option("--terms", flags.terms, "custom right-hand side, e.g. \"-1 * u * dx(u) + 1 * dx(u,2)\"");
  app.add_option("--initial", flags.initial, "initial condition f(x)");
  app.add_option("--exact", flags.exact, "exact solution u(x,t)");
  app.add_option("--T", flags.T, "time horizon");
  app.add_option("--N", flags.N, "number of subintervals");
  app.add_option("--Ns", flags.Ns, "comma-separated N values for converge");
  app.add_option("--order", flags.order, "Taylor order per subinterval");
  app.add_option("--xs", flags.xs, "comma-separated sample x values");
  app.add_option("--ts", flags.ts, "comma-separated sample t values");
  app.add_option("--output", flags.output, "output file (default: standard output)");
  app.add_option("--format", flags.format, "csv | plotgrid");
  app.add_option("--config", config_path, "key = value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const Command cmd = parse_command(command);
    RunConfig config = flags;
    if (config_path) config = flags.overlay(read_config_file(*config_path));
    return run(cmd, config, std::cout, std::cerr);
  } catch (const rdtm::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
}
