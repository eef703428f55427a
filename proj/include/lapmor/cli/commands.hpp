#pragma once

#include <string>

#include "lapmor/cli/config.hpp"
#include "lapmor/model.hpp"
#include "lapmor/rom.hpp"

namespace lapmor::cli {

/// Everything the offline and compare commands share: model, training set,
/// validated quadrature grid and the estimator context.
struct Setup {
  DiscretizedModel model;
  ParameterGrid xi;
  EstimatorContext ctx;
  int profile_rounds = 0;
  double profile_bound = 0.0;
  std::int64_t eigenproblems = 0;
  double seconds = 0.0;
};

DiscretizedModel build_model(const ExperimentConfig& cfg);
ParameterGrid build_training_set(const ExperimentConfig& cfg);
/// Contour, truncation and node count from the config, falling back to the
/// model hint and then to the automatic choices.
QuadratureGrid build_quadrature(const ExperimentConfig& cfg, const DiscretizedModel& model);
Setup prepare(const ExperimentConfig& cfg);

// Each command writes its CSV files into cfg.out_dir and returns 0; errors
// propagate as exceptions and are mapped to exit codes by run_command.
int cmd_offline(const ExperimentConfig& cfg);
int cmd_online(const ExperimentConfig& cfg);
int cmd_compare(const ExperimentConfig& cfg);
int cmd_sigma_lb(const ExperimentConfig& cfg);
int cmd_svd_study(const ExperimentConfig& cfg);

/// Dispatches by name. Exit codes: 0 success, 2 invalid input, 3 time
/// outside the validated window, 1 any other failure.
int run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace lapmor::cli
