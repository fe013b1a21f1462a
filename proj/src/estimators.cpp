#include "lbkld/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lbkld/entropy.hpp"
#include "lbkld/kernels.hpp"
#include "lbkld/parallel.hpp"
#include "lbkld/partition.hpp"

namespace lbkld {

std::string estimator_kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::lbkld_partition: return "lbkld_partition";
    case EstimatorKind::lbkld_nopartition: return "lbkld_nopartition";
    case EstimatorKind::nested_mc_kld: return "nested_mc_kld";
    case EstimatorKind::d_posterior_precision: return "d_posterior_precision";
  }
  throw std::logic_error("estimator_kind_name: bad enum value");
}

EstimatorKind estimator_kind_from_name(const std::string& name) {
  if (name == "lbkld_partition") return EstimatorKind::lbkld_partition;
  if (name == "lbkld_nopartition") return EstimatorKind::lbkld_nopartition;
  if (name == "nested_mc_kld") return EstimatorKind::nested_mc_kld;
  if (name == "d_posterior_precision") {
    return EstimatorKind::d_posterior_precision;
  }
  throw std::invalid_argument("unknown estimator kind '" + name + "'");
}

namespace {

void mean_and_se(const std::vector<double>& values, double* mean, double* se) {
  const std::size_t n = values.size();
  double m = 0.0;
  for (const double v : values) m += v;
  m /= static_cast<double>(n);
  *mean = m;
  if (n < 2) {
    *se = 0.0;
    return;
  }
  double ss = 0.0;
  for (const double v : values) ss += (v - m) * (v - m);
  *se = std::sqrt(ss / static_cast<double>(n - 1)) /
        std::sqrt(static_cast<double>(n));
}

// One replication of the pair-difference bound.  Stream layout (all
// derived from rep_stream, so the partitioned and single-group paths
// consume identical draws and the num_groups = 1 case is bit-identical to
// the no-partition estimator):
//   fold(0)  joint draws (theta_i, y*_i), in index order
//   fold(1)  jitter of the y* copy
//   fold(2)  the fresh pairs (y_i, y'_i), in index order
//   fold(3)  jitter of every z_i, in index order, before any grouping
//   fold(4)  clustering (untouched when partitioned is false)
double lbkld_single_rep(const SimulationModel& model,
                        const DesignPoint& design, const LbkldConfig& cfg,
                        bool partitioned, RngStream rep_stream,
                        const std::vector<double>& jitter_scales) {
  const std::size_t p = model.theta_dim();
  const std::size_t dim = jitter_scales.size();

  SampleBatch theta(cfg.n, p);
  SampleBatch y_star(cfg.n, dim);
  {
    RngStream joint = rep_stream.fold(0);
    for (std::size_t i = 0; i < cfg.n; ++i) {
      model.prior_sample(joint, {theta.row(i), p});
      model.simulate({theta.row(i), p}, design, joint, {y_star.row(i), dim});
    }
  }

  // marginal entropy from a jittered copy; the clustering below sees the
  // raw draws
  double h_star;
  {
    SampleBatch y_jittered = y_star;
    RngStream jit = rep_stream.fold(1);
    jitter_columns(y_jittered, jitter_scales, jit);
    h_star = knn_entropy(y_jittered, cfg.k_nn).value;
  }

  SampleBatch z(cfg.n, dim);
  {
    RngStream pairs = rep_stream.fold(2);
    std::vector<double> y1(dim), y2(dim);
    for (std::size_t i = 0; i < cfg.n; ++i) {
      model.simulate({theta.row(i), p}, design, pairs, y1);
      model.simulate({theta.row(i), p}, design, pairs, y2);
      kernels::subtract(y1.data(), y2.data(), z.row(i), dim);
    }
  }
  {
    RngStream jit = rep_stream.fold(3);
    jitter_columns(z, jitter_scales, jit);
  }

  double group_entropy_sum = 0.0;
  if (partitioned) {
    RngStream part = rep_stream.fold(4);
    const PartitionResult pr =
        partition_prior(theta, y_star, cfg.num_groups, cfg.min_group, part);
    std::vector<double> buf;
    for (std::size_t l = 0; l < pr.groups.size(); ++l) {
      const auto& group = pr.groups[l];
      buf.resize(group.size() * dim);
      for (std::size_t g = 0; g < group.size(); ++g) {
        const double* src = z.row(group[g]);
        std::copy(src, src + dim, buf.begin() + g * dim);
      }
      const double h_l = knn_entropy(buf.data(), group.size(), dim, cfg.k_nn).value;
      group_entropy_sum += pr.weights[l] * h_l;
    }
  } else {
    group_entropy_sum = knn_entropy(z, cfg.k_nn).value;
  }

  return -group_entropy_sum + 0.5 * static_cast<double>(dim) * std::log(2.0) +
         h_star;
}

UtilityEstimate lbkld_impl(const SimulationModel& model,
                           const DesignPoint& design, const LbkldConfig& cfg,
                           bool partitioned, RngStream rng,
                           std::size_t workers) {
  model.validate_design(design);
  if (cfg.replications < 1) {
    throw std::invalid_argument("lbkld config: replications must be >= 1");
  }
  if (!(cfg.jitter_scale >= 0.0)) {
    throw std::invalid_argument("lbkld config: jitter_scale must be >= 0");
  }
  if (cfg.n < cfg.k_nn + 1) {
    throw std::invalid_argument("lbkld config: n must exceed k_nn");
  }
  if (partitioned) {
    if (cfg.num_groups < 1) {
      throw std::invalid_argument("lbkld config: num_groups must be >= 1");
    }
    if (cfg.n < cfg.num_groups * cfg.min_group) {
      throw std::invalid_argument(
          "lbkld config: infeasible partition, n < num_groups * min_group");
    }
    if (cfg.min_group < cfg.k_nn + 1) {
      throw std::invalid_argument(
          "lbkld config: min_group must be at least k_nn + 1 so every group "
          "supports the entropy estimate");
    }
  }

  std::vector<double> scales = model.output_lattice(design);
  for (double& s : scales) s *= cfg.jitter_scale;

  std::vector<double> values(cfg.replications);
  parallel_for(cfg.replications, workers, [&](std::size_t r) {
    values[r] =
        lbkld_single_rep(model, design, cfg, partitioned, rng.fold(r), scales);
  });

  UtilityEstimate est;
  est.design = design;
  est.kind = partitioned ? EstimatorKind::lbkld_partition
                         : EstimatorKind::lbkld_nopartition;
  est.replications = cfg.replications;
  est.n_sims = static_cast<std::uint64_t>(3) * cfg.n * cfg.replications;
  mean_and_se(values, &est.value, &est.std_error);
  return est;
}

}  // namespace

UtilityEstimate lbkld_estimate(const SimulationModel& model,
                               const DesignPoint& design,
                               const LbkldConfig& cfg, RngStream rng,
                               std::size_t workers) {
  return lbkld_impl(model, design, cfg, true, rng, workers);
}

UtilityEstimate lbkld_no_partition(const SimulationModel& model,
                                   const DesignPoint& design,
                                   const LbkldConfig& cfg, RngStream rng,
                                   std::size_t workers) {
  return lbkld_impl(model, design, cfg, false, rng, workers);
}

UtilityEstimate nested_mc_kld(const SimulationModel& model,
                              const DesignPoint& design,
                              const NestedMcConfig& cfg, RngStream rng,
                              std::size_t workers) {
  model.validate_design(design);
  if (!model.has_log_likelihood()) {
    throw std::invalid_argument("nested_mc_kld needs a tractable likelihood; "
                                "model '" +
                                model.name() + "' has none");
  }
  if (cfg.n < 1 || cfg.n_inner < 1) {
    throw std::invalid_argument(
        "nested_mc config: n and n_inner must be >= 1");
  }

  const std::size_t p = model.theta_dim();
  const std::size_t dim = model.dim_y(design);
  const double log_n_inner = std::log(static_cast<double>(cfg.n_inner));

  std::vector<double> terms(cfg.n);
  parallel_for(cfg.n, workers, [&](std::size_t i) {
    RngStream s = rng.fold(i);
    std::vector<double> theta(p), y(dim), theta_j(p);
    std::vector<double> inner(cfg.n_inner);
    model.prior_sample(s, theta);
    model.simulate(theta, design, s, y);
    const double ll_joint = model.log_likelihood(y, theta, design);

    double max_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cfg.n_inner; ++j) {
      model.prior_sample(s, theta_j);
      inner[j] = model.log_likelihood(y, theta_j, design);
      if (inner[j] > max_ll) max_ll = inner[j];
    }
    double sum = 0.0;
    for (const double ll : inner) sum += std::exp(ll - max_ll);
    const double log_marginal = max_ll + std::log(sum) - log_n_inner;
    terms[i] = ll_joint - log_marginal;
  });

  UtilityEstimate est;
  est.design = design;
  est.kind = EstimatorKind::nested_mc_kld;
  est.replications = 1;
  est.n_sims = cfg.n;
  mean_and_se(terms, &est.value, &est.std_error);
  return est;
}

}  // namespace lbkld
