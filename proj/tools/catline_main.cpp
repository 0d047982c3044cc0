#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catline/plot.hpp"
#include "catline/scenario.hpp"
#include "catline/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNotConverged = 4;

int run_command(const std::string& scenario_arg, const std::string& config_path,
                const std::optional<std::string>& out_dir,
                const std::optional<int>& dim,
                const std::optional<std::uint64_t>& seed,
                const std::optional<int>& collisions) {
  using namespace catline;
  const Scenario scenario = scenario_from_name(scenario_arg);
  ScenarioConfig config = load_config(config_path, scenario);

  if (out_dir) {
    config.run.out_dir = *out_dir;
  } else if (const char* env = std::getenv("CATLINE_OUT")) {
    config.run.out_dir = env;
  }
  if (dim) config.run.dim = *dim;
  if (seed) {
    config.run.seed = *seed;
    config.collision.seed = *seed;
  }
  if (collisions) config.collision.n_collisions = *collisions;
  validate_config(config);

  ScenarioResult result = run_scenario(config);
  for (const auto& f : result.files) {
    std::cout << "wrote " << f << "\n";
  }
  if (config.scenario == Scenario::Classify && !result.converged) {
    std::cerr << "classify did not converge within "
              << config.collision.n_collisions << " collisions\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catline: driven-dissipative Kerr-cat qubit scenario runner"};
  app.set_version_flag("--version", std::string("catline ") + catline::kVersion);
  app.require_subcommand(1);

  std::string scenario, config_path, plot_csv, plot_out;
  std::optional<std::string> out_dir;
  std::optional<int> dim, collisions;
  std::optional<std::uint64_t> seed;

  CLI::App* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("scenario", scenario,
                  "stabilize | ramp | homogenize | classify")
      ->required();
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--out", out_dir, "output directory (default CATLINE_OUT or config)");
  run->add_option("--dim", dim, "override truncation dimension");
  run->add_option("--seed", seed, "override RNG seed");
  run->add_option("--collisions", collisions, "override collision count");

  CLI::App* plot = app.add_subcommand("plot", "render a trace CSV as SVG");
  plot->add_option("csv", plot_csv, "input CSV produced by catline run")
      ->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      return run_command(scenario, config_path, out_dir, dim, seed, collisions);
    }
    catline::emit_plot(plot_csv, plot_out);
    std::cout << "wrote " << plot_out << "\n";
    return kExitOk;
  } catch (const catline::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const catline::StepSizeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const catline::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
