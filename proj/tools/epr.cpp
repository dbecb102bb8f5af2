// epr: radially symmetric Euler-Poisson runs and audits.
//
//   epr run <config> [--out dir]
//   epr sweep <config-dir> [--workers n] [--out dir]
//   epr emden <R0> <M> <N> <t_end>
//   epr bounds <config>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epr/commands.hpp"

namespace {

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radially symmetric Euler-Poisson simulator with analytic audits"};
  app.require_subcommand(1);

  std::string out_dir;
  int workers = 1;
  long seed = 0;
  app.add_option("--out", out_dir, "Directory for CSV and report files");
  app.add_option("--workers", workers, "Concurrent runs in a sweep")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Reserved; the pipeline is deterministic");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Evolve one configuration and audit it");
  run->add_option("config", config_path, "Configuration file")->required();

  std::string sweep_dir;
  auto* sweep = app.add_subcommand("sweep", "Run every .ini configuration in a directory");
  sweep->add_option("config-dir", sweep_dir, "Directory of configurations")->required();

  double R0 = 1.0, M = 1.0, t_end = 1.0;
  int N = 3;
  auto* emden = app.add_subcommand("emden", "Integrate the boundary characteristic ODE");
  emden->add_option("R0", R0)->required();
  emden->add_option("M", M)->required();
  emden->add_option("N", N)->required();
  emden->add_option("t_end", t_end)->required();

  std::string bounds_path;
  auto* bounds = app.add_subcommand("bounds", "Print the expansion bounds of the initial state");
  bounds->add_option("config", bounds_path, "Configuration file")->required();

  for (auto* sub : {run, sweep, emden, bounds}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  (void)seed;

  const std::optional<std::filesystem::path> out =
      out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
  try {
    epr::CommandResult result;
    if (*run) {
      result = epr::run_command(epr::load_config(config_path, stem_of(config_path)), out);
    } else if (*sweep) {
      result = epr::sweep_command(epr::load_sweep_dir(sweep_dir), workers, out);
    } else if (*emden) {
      result = epr::emden_command(R0, M, N, t_end);
      if (out) {
        std::filesystem::create_directories(*out);
        epr::detail::write_text(*out / "emden.csv", result.output);
      }
    } else {
      result = epr::bounds_command(epr::load_config(bounds_path, stem_of(bounds_path)));
    }
    std::cout << result.output;
    return result.exit_code;
  } catch (const epr::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
