#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lbkld/batch.hpp"
#include "lbkld/models.hpp"
#include "lbkld/rng.hpp"

namespace lbkld {

enum class EstimatorKind {
  lbkld_partition,
  lbkld_nopartition,
  nested_mc_kld,
  d_posterior_precision,
};

std::string estimator_kind_name(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(const std::string& name);

struct UtilityEstimate {
  DesignPoint design;
  EstimatorKind kind = EstimatorKind::lbkld_partition;
  double value = 0.0;
  double std_error = 0.0;      // over replications (0 when replications < 2)
  std::uint64_t n_sims = 0;    // total simulator calls, exactly accounted
  std::size_t replications = 0;
  // d-posterior only: some accepted-sample covariance determinant hit the
  // 1e-300 floor, so the precision was capped
  bool degenerate = false;
};

struct LbkldConfig {
  std::size_t n = 10000;        // joint draws per replication
  std::size_t num_groups = 5;   // L, prior mixture components
  std::size_t min_group = 10;   // n_min, smallest allowed component
  std::size_t k_nn = 3;         // neighbor order of the entropy estimate
  double jitter_scale = 1.0;    // multiplies the model's output lattice
  std::size_t replications = 20;
};

struct NestedMcConfig {
  std::size_t n = 10000;       // outer joint draws
  std::size_t n_inner = 1000;  // prior draws per outer sample
};

struct AbcConfig {
  std::size_t n_sim = 10000;  // prior-predictive pool size
  std::size_t n_keep = 100;   // accepted sample count
  std::size_t n_outer = 100;  // synthetic observed datasets
  bool reuse_pool = true;     // one pool for all outer datasets
};

// Expected-utility lower bound from forward simulations only: per
// replication, n joint draws give the marginal entropy H(y) and the
// partition of the prior; a fresh pair (y, y') per draw gives the
// difference z = y - y' whose per-group entropies bound the conditional
// entropy.  Utility = -sum_l w_l H(z | group l) + (dim/2) log 2 + H(y).
// Costs exactly 3n simulator calls per replication.
UtilityEstimate lbkld_estimate(const SimulationModel& model,
                               const DesignPoint& design,
                               const LbkldConfig& cfg, RngStream rng,
                               std::size_t workers = 1);

// Same bound with a single group (the partition step skipped entirely);
// with num_groups = 1 the partitioned estimator matches this one
// bit-for-bit on the same stream.
UtilityEstimate lbkld_no_partition(const SimulationModel& model,
                                   const DesignPoint& design,
                                   const LbkldConfig& cfg, RngStream rng,
                                   std::size_t workers = 1);

// Double-loop estimate of the expected KL divergence, usable only when
// the model has a tractable likelihood: mean over joint draws of
// log p(y_i | theta_i) - log[(1/n') sum_j p(y_i | theta_ij)], inner sum
// by max-shifted log-sum-exp.  std_error comes from the n outer terms.
UtilityEstimate nested_mc_kld(const SimulationModel& model,
                              const DesignPoint& design,
                              const NestedMcConfig& cfg, RngStream rng,
                              std::size_t workers = 1);

// Prior-predictive pool for rejection sampling, with the per-coordinate
// standard deviations used to standardize distances (0 marks a
// zero-variance coordinate, which is dropped from the distance).
struct AbcPool {
  SampleBatch theta;
  SampleBatch y;
  std::vector<double> scale;
};

AbcPool abc_make_pool(const SimulationModel& model, const DesignPoint& design,
                      std::size_t n_sim, RngStream rng);

// The n_keep pool entries nearest y_obs in standardized Euclidean
// distance, returned as their theta rows ordered by distance (ties by
// pool index).
SampleBatch abc_rejection(const AbcPool& pool, std::span<const double> y_obs,
                          std::size_t n_keep);

struct MomentSummary {
  std::size_t dim = 0;
  std::vector<double> mean;  // length dim
  std::vector<double> cov;   // dim x dim row-major, unbiased
};

MomentSummary posterior_summary(const SampleBatch& samples);

// Baseline utility 1 / det(posterior covariance): per outer dataset, draw
// a synthetic truth, run rejection sampling against the pool, invert the
// accepted-sample covariance determinant.  Determinants at or below
// 1e-300 are floored and flagged via UtilityEstimate::degenerate.
UtilityEstimate d_posterior_precision(const SimulationModel& model,
                                      const DesignPoint& design,
                                      const AbcConfig& cfg, RngStream rng,
                                      std::size_t workers = 1);

// Repeated-inference study at a fixed design: per trial, draw a truth,
// infer via rejection sampling, record the posterior mean.  mse[j] is the
// mean squared error of the posterior mean in coordinate j over trials
// (trial count = cfg.n_outer).
struct InferenceTrial {
  std::vector<double> theta_true;
  std::vector<double> posterior_mean;
};

struct InferenceStudy {
  std::vector<InferenceTrial> trials;
  std::vector<double> mse;
  std::uint64_t n_sims = 0;
};

InferenceStudy replicate_inference(const SimulationModel& model,
                                   const DesignPoint& design,
                                   const AbcConfig& cfg, RngStream rng,
                                   std::size_t workers = 1);

}  // namespace lbkld
