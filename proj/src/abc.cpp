#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lbkld/estimators.hpp"
#include "lbkld/parallel.hpp"

namespace lbkld {

namespace {

// Determinants at or below this are treated as degenerate; the precision
// utility is capped instead of overflowing.
constexpr double kDetFloor = 1e-300;

void validate_abc(const AbcConfig& cfg, std::size_t min_keep) {
  if (cfg.n_sim < 2) {
    throw std::invalid_argument("abc config: n_sim must be >= 2");
  }
  if (cfg.n_keep < min_keep) {
    throw std::invalid_argument("abc config: n_keep too small");
  }
  if (cfg.n_keep > cfg.n_sim) {
    throw std::invalid_argument("abc config: n_keep must not exceed n_sim");
  }
  if (cfg.n_outer < 1) {
    throw std::invalid_argument("abc config: n_outer must be >= 1");
  }
}

std::vector<double> accepted_mean(const SampleBatch& accepted) {
  std::vector<double> mean(accepted.dim, 0.0);
  for (std::size_t i = 0; i < accepted.n; ++i) {
    for (std::size_t d = 0; d < accepted.dim; ++d) {
      mean[d] += accepted.at(i, d);
    }
  }
  for (double& m : mean) m /= static_cast<double>(accepted.n);
  return mean;
}

}  // namespace

AbcPool abc_make_pool(const SimulationModel& model, const DesignPoint& design,
                      std::size_t n_sim, RngStream rng) {
  model.validate_design(design);
  if (n_sim < 2) {
    throw std::invalid_argument("abc pool needs n_sim >= 2");
  }
  const std::size_t p = model.theta_dim();
  const std::size_t dim = model.dim_y(design);

  AbcPool pool;
  pool.theta = SampleBatch(n_sim, p);
  pool.y = SampleBatch(n_sim, dim);
  for (std::size_t i = 0; i < n_sim; ++i) {
    model.prior_sample(rng, {pool.theta.row(i), p});
    model.simulate({pool.theta.row(i), p}, design, rng, {pool.y.row(i), dim});
  }

  pool.scale.assign(dim, 0.0);
  for (std::size_t d = 0; d < dim; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n_sim; ++i) mean += pool.y.at(i, d);
    mean /= static_cast<double>(n_sim);
    double ss = 0.0;
    for (std::size_t i = 0; i < n_sim; ++i) {
      const double diff = pool.y.at(i, d) - mean;
      ss += diff * diff;
    }
    pool.scale[d] = std::sqrt(ss / static_cast<double>(n_sim - 1));
  }
  return pool;
}

SampleBatch abc_rejection(const AbcPool& pool, std::span<const double> y_obs,
                          std::size_t n_keep) {
  if (n_keep == 0 || n_keep > pool.y.n) {
    throw std::invalid_argument(
        "abc_rejection: n_keep must be in [1, pool size]");
  }
  if (y_obs.size() != pool.y.dim) {
    throw std::invalid_argument(
        "abc_rejection: y_obs dimension does not match the pool");
  }

  std::vector<std::pair<double, std::size_t>> ranked(pool.y.n);
  for (std::size_t i = 0; i < pool.y.n; ++i) {
    double d2 = 0.0;
    for (std::size_t d = 0; d < pool.y.dim; ++d) {
      if (pool.scale[d] <= 0.0) continue;  // constant coordinate carries no signal
      const double diff = (pool.y.at(i, d) - y_obs[d]) / pool.scale[d];
      d2 += diff * diff;
    }
    ranked[i] = {d2, i};
  }
  std::partial_sort(ranked.begin(), ranked.begin() + n_keep, ranked.end());

  SampleBatch accepted(n_keep, pool.theta.dim);
  for (std::size_t j = 0; j < n_keep; ++j) {
    const double* src = pool.theta.row(ranked[j].second);
    std::copy(src, src + pool.theta.dim, accepted.row(j));
  }
  return accepted;
}

MomentSummary posterior_summary(const SampleBatch& samples) {
  if (samples.n < 2) {
    throw std::invalid_argument("posterior_summary needs at least 2 samples");
  }
  MomentSummary out;
  out.dim = samples.dim;
  out.mean = accepted_mean(samples);
  out.cov.assign(samples.dim * samples.dim, 0.0);
  for (std::size_t i = 0; i < samples.n; ++i) {
    for (std::size_t r = 0; r < samples.dim; ++r) {
      const double dr = samples.at(i, r) - out.mean[r];
      for (std::size_t c = 0; c < samples.dim; ++c) {
        out.cov[r * samples.dim + c] += dr * (samples.at(i, c) - out.mean[c]);
      }
    }
  }
  for (double& v : out.cov) v /= static_cast<double>(samples.n - 1);
  return out;
}

UtilityEstimate d_posterior_precision(const SimulationModel& model,
                                      const DesignPoint& design,
                                      const AbcConfig& cfg, RngStream rng,
                                      std::size_t workers) {
  model.validate_design(design);
  validate_abc(cfg, 2);  // covariance needs two accepted samples

  const std::size_t p = model.theta_dim();
  const std::size_t dim = model.dim_y(design);

  std::optional<AbcPool> shared;
  if (cfg.reuse_pool) {
    shared = abc_make_pool(model, design, cfg.n_sim, rng.fold(0));
  }

  std::vector<double> precision(cfg.n_outer);
  std::vector<unsigned char> floored(cfg.n_outer, 0);
  parallel_for(cfg.n_outer, workers, [&](std::size_t i) {
    RngStream s = rng.fold(1).fold(i);
    std::vector<double> theta_true(p), y_obs(dim);
    model.prior_sample(s, theta_true);
    model.simulate(theta_true, design, s, y_obs);

    std::optional<AbcPool> local;
    const AbcPool& pool =
        shared ? *shared
               : local.emplace(abc_make_pool(model, design, cfg.n_sim,
                                             rng.fold(2).fold(i)));

    const SampleBatch accepted = abc_rejection(pool, y_obs, cfg.n_keep);
    const MomentSummary ms = posterior_summary(accepted);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                         Eigen::Dynamic, Eigen::RowMajor>>
        cov(ms.cov.data(), static_cast<Eigen::Index>(p),
            static_cast<Eigen::Index>(p));
    double det = cov.determinant();
    if (!(det > kDetFloor)) {
      det = kDetFloor;
      floored[i] = 1;
    }
    precision[i] = 1.0 / det;
  });

  UtilityEstimate est;
  est.design = design;
  est.kind = EstimatorKind::d_posterior_precision;
  est.replications = cfg.n_outer;
  est.n_sims = cfg.reuse_pool
                   ? static_cast<std::uint64_t>(cfg.n_sim) + cfg.n_outer
                   : static_cast<std::uint64_t>(cfg.n_outer) * (cfg.n_sim + 1);
  for (const unsigned char f : floored) {
    if (f) est.degenerate = true;
  }

  double mean = 0.0;
  for (const double u : precision) mean += u;
  mean /= static_cast<double>(cfg.n_outer);
  est.value = mean;
  if (cfg.n_outer >= 2) {
    double ss = 0.0;
    for (const double u : precision) ss += (u - mean) * (u - mean);
    est.std_error = std::sqrt(ss / static_cast<double>(cfg.n_outer - 1)) /
                    std::sqrt(static_cast<double>(cfg.n_outer));
  }
  return est;
}

InferenceStudy replicate_inference(const SimulationModel& model,
                                   const DesignPoint& design,
                                   const AbcConfig& cfg, RngStream rng,
                                   std::size_t workers) {
  model.validate_design(design);
  validate_abc(cfg, 1);  // a posterior mean works from a single sample

  const std::size_t p = model.theta_dim();
  const std::size_t dim = model.dim_y(design);

  std::optional<AbcPool> shared;
  if (cfg.reuse_pool) {
    shared = abc_make_pool(model, design, cfg.n_sim, rng.fold(0));
  }

  InferenceStudy study;
  study.trials.resize(cfg.n_outer);
  parallel_for(cfg.n_outer, workers, [&](std::size_t i) {
    RngStream s = rng.fold(1).fold(i);
    InferenceTrial& trial = study.trials[i];
    trial.theta_true.resize(p);
    model.prior_sample(s, trial.theta_true);
    std::vector<double> y_obs(dim);
    model.simulate(trial.theta_true, design, s, y_obs);

    std::optional<AbcPool> local;
    const AbcPool& pool =
        shared ? *shared
               : local.emplace(abc_make_pool(model, design, cfg.n_sim,
                                             rng.fold(2).fold(i)));

    const SampleBatch accepted = abc_rejection(pool, y_obs, cfg.n_keep);
    trial.posterior_mean = accepted_mean(accepted);
  });

  study.mse.assign(p, 0.0);
  for (const InferenceTrial& trial : study.trials) {
    for (std::size_t d = 0; d < p; ++d) {
      const double err = trial.posterior_mean[d] - trial.theta_true[d];
      study.mse[d] += err * err;
    }
  }
  for (double& v : study.mse) v /= static_cast<double>(cfg.n_outer);
  study.n_sims = cfg.reuse_pool
                     ? static_cast<std::uint64_t>(cfg.n_sim) + cfg.n_outer
                     : static_cast<std::uint64_t>(cfg.n_outer) * (cfg.n_sim + 1);
  return study;
}

}  // namespace lbkld
