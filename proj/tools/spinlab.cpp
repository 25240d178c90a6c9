#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spinlab: Ising model simulation and inference"};
  app.set_version_flag("--version", spinlab::kVersion);
  app.require_subcommand(1);

  std::string run_config, validate_config;
  std::optional<std::string> output;
  auto* run = app.add_subcommand("run", "Run the experiment declared in a config file");
  run->add_option("config", run_config, "Config file")->required();
  run->add_option("-o,--output", output, "Output directory (overrides the config's `output`)");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", validate_config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spinlab::kExitInvalid;
  }

  if (*run) return spinlab::cli_run(run_config, output, std::cout, std::cerr);
  return spinlab::cli_validate(validate_config, std::cout);
}
