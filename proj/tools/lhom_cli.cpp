// Command-line front end: lhom <command> [--config file.json] [overrides...]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "lhom/io/run.hpp"

int main(int argc, char** argv) {
  using namespace lhom::io;

  CLI::App app{"Random conductance lattice homogenization laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--L", overrides.L, "lattice side length");
  app.add_option("--d", overrides.d, "lattice dimension");
  app.add_option("--lambda", overrides.lambda, "ellipticity constant");
  app.add_option("--seed", overrides.seed, "master seed");
  app.add_option("--samples", overrides.samples, "number of Monte-Carlo samples");
  app.add_option("--p", overrides.p, "moment exponent");
  app.add_option("--q", overrides.q, "oscillation exponents")->expected(1, -1);
  app.add_option("--out", overrides.out, "output path prefix (.json / .csv appended)");
  app.add_option("--threads", overrides.threads, "worker threads (0 = all cores)");
  for (const auto& name : command_names()) app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  overrides.command = app.get_subcommands().front()->get_name();

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }

  RunConfig config;
  try {
    config = parse_config(text, overrides);
  } catch (const std::exception& e) {
    std::cerr << dump_json(error_report("config", e));
    return 1;
  }
  return run(config, std::cerr);
}
