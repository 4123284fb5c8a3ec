// isac_sim: Monte Carlo simulator for sensing-assisted UAV/BS networks.
//
//   isac_sim --config run.cfg --mode sweep --out results/ --seed 7 --parallelism 8

#include <CLI11.hpp>

#include "isac/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Network-level ISAC Monte Carlo simulator"};

  std::string config_path;
  std::string mode = "single";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  int parallelism = 1;

  auto* config_opt = app.add_option("--config", config_path, "Config file (key = value)");
  app.add_option("--mode", mode, "single | sweep | calibrate")
      ->check(CLI::IsMember({"single", "sweep", "calibrate"}));
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override master_seed");
  auto* rounds_opt = app.add_option("--rounds", rounds, "Override rounds (and rounds per cell)");
  app.add_option("--parallelism", parallelism, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? isac::kExitOk : isac::kExitConfigError;
  }

  isac::configure_logging();

  isac::RunSpec spec;
  spec.mode = *isac::parse_run_mode(mode);
  if (*config_opt) spec.config_path = config_path;
  spec.output_dir = out_dir;
  if (*seed_opt) spec.seed_override = seed;
  if (*rounds_opt) spec.rounds_override = rounds;
  spec.parallelism = parallelism;
  return isac::main_run(spec);
}
