#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "lbkld/estimators.hpp"
#include "lbkld/models.hpp"
#include "lbkld/optimize.hpp"

namespace lbkld {

// A fully parsed run description: model, estimator and its settings,
// design space, seed, and execution knobs.  Every command takes one of
// these plus command-line overrides.
struct RunConfig {
  std::string model_name = "toy";
  double toy_noise_sd = 0.05;
  std::size_t ricker_horizon = 50;
  double ricker_initial_state = 1.0;
  long aphid_n0 = 28;
  long aphid_c0 = 28;

  EstimatorKind estimator = EstimatorKind::lbkld_partition;
  LbkldConfig lbkld;
  NestedMcConfig nested;
  AbcConfig abc;
  SpsaConfig spsa;

  DesignSpec design;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0: decided at run time (env var, then hardware)
  std::string output_path;

  std::unique_ptr<SimulationModel> make_model() const;
};

// Strict JSON parse: unknown keys, wrong types, and out-of-range values
// raise std::invalid_argument naming the offending key path.
RunConfig parse_run_config(const std::string& json_text);

}  // namespace lbkld
