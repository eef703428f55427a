#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "lapmor/cli/commands.hpp"
#include "lapmor/cli/config.hpp"
#include "lapmor/errors.hpp"

int main(int argc, char** argv) {
  using namespace lapmor::cli;
  CLI::App app{"Laplace-domain model order reduction benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  bool paper_scale = false;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value settings file");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--paper-scale", paper_scale, "use the large problem sizes");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads (0: runtime default)");
  app.add_option("--set", overrides, "extra key=value setting, repeatable");

  app.add_subcommand("offline", "run the greedy and write offline.lmor plus offline_log.csv");
  app.add_subcommand("online", "evaluate a stored reduced model at online.mu and online.t");
  app.add_subcommand("compare", "Laplace vs time-stepping reduced models: errors and online times");
  app.add_subcommand("sigma-lb", "optimized smallest singular value lower bounds at contour nodes");
  app.add_subcommand("svd-study", "singular values of time-domain vs Laplace-domain snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    KeyValues kv = config_path.empty() ? KeyValues{} : KeyValues::load(config_path);
    for (const auto& item : overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw lapmor::ConfigError("--set expects key=value, got '" + item + "'");
      kv.set(item.substr(0, eq), item.substr(eq + 1));
    }
    if (seed) kv.set("seed", std::to_string(*seed));
    cfg = ExperimentConfig::from_settings(kv, paper_scale);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (threads < 0) {
    std::cerr << "error: --threads must be non-negative\n";
    return 2;
  }
  cfg.out_dir = out_dir;
  cfg.threads = threads;
  if (threads > 0) omp_set_num_threads(threads);
  return run_command(app.get_subcommands().front()->get_name(), cfg);
}
