#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relaxrk/cli/drivers.hpp"
#include "relaxrk/errors.hpp"
#include "relaxrk/problems.hpp"
#include "relaxrk/tableau.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct CommandArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string output_dir;
};

void add_common(CLI::App* cmd, CommandArgs& args) {
  cmd->add_option("-c,--config", args.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", args.overrides, "Override a config field, e.g. --set relaxation.mode=global")
      ->take_all();
  cmd->add_option("-o,--output-dir", args.output_dir, "Directory for CSV output (same as --set output_dir=...)");
}

relaxrk::cli::RunConfig load(const CommandArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (!args.output_dir.empty()) overrides.push_back("output_dir=\"" + args.output_dir + "\"");
  std::optional<std::filesystem::path> path;
  if (!args.config.empty()) path = args.config;
  return relaxrk::cli::load_run_config(path, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxation Runge-Kutta methods with local entropy inequalities for the Euler equations"};
  app.require_subcommand(1);

  CommandArgs run_args;
  CommandArgs conv_args;
  CommandArgs gamma_args;
  CLI::App* run = app.add_subcommand("run", "Integrate one configuration and write solution/history/elements CSV");
  CLI::App* conv = app.add_subcommand("convergence", "Mesh refinement study at constant Courant number");
  CLI::App* gamma = app.add_subcommand("gamma-history", "Record the relaxation parameters of every step");
  CLI::App* list = app.add_subcommand("list", "List problems and Runge-Kutta methods");
  add_common(run, run_args);
  add_common(conv, conv_args);
  add_common(gamma, gamma_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*list) {
      std::cout << "problems:";
      for (const auto& n : relaxrk::problem_names()) std::cout << ' ' << n;
      std::cout << "\ntableaus:";
      for (const auto& n : relaxrk::builtin_tableau_names()) std::cout << ' ' << n;
      std::cout << '\n';
      return 0;
    }
    if (*run) return relaxrk::cli::cmd_run(load(run_args), std::cout);
    if (*conv) return relaxrk::cli::cmd_convergence(load(conv_args), std::cout);
    if (*gamma) return relaxrk::cli::cmd_gamma_history(load(gamma_args), std::cout);
  } catch (const relaxrk::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const relaxrk::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_config;
  }
  return 0;
}
