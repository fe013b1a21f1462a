// Acceptance gate: eleven end-to-end checks of the estimators, the
// optimizers, and the benchmark models at desk scale.  Each criterion
// prints one PASS/FAIL line with measured numbers and its runtime; the
// exit status is the number of failures.  Heavy criteria take minutes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lbkld/entropy.hpp"
#include "lbkld/estimators.hpp"
#include "lbkld/models.hpp"
#include "lbkld/optimize.hpp"
#include "lbkld/parallel.hpp"
#include "lbkld/partition.hpp"
#include "lbkld/rng.hpp"

namespace {

using lbkld::DesignPoint;
using lbkld::RngStream;
using lbkld::UtilityEstimate;

int failures = 0;

class Criterion {
 public:
  explicit Criterion(int number) : number_(number), start_(Clock::now()) {}

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  void finish(bool ok, const std::string& label, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s; %.1f s)\n", ok ? "PASS" : "FAIL",
                number_, label.c_str(), detail.c_str(), elapsed());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

 private:
  using Clock = std::chrono::steady_clock;
  int number_;
  Clock::time_point start_;
};

double combined_se(double a, double b) { return std::hypot(a, b); }

// Linear-interpolated percentile of an unsorted sample, q in [0, 1].
double percentile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  double pos = q * static_cast<double>(x.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= x.size()) return x.back();
  double frac = pos - static_cast<double>(lo);
  return x[lo] + frac * (x[lo + 1] - x[lo]);
}

struct ShapeStats {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

ShapeStats shape_stats(std::span<const double> x) {
  double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

// Tractable reference model for the analytic-value criterion: theta and
// the observation noise are both standard normal, so the expected KL
// divergence from prior to posterior is exactly half log 2.
class GaussianLocationModel final : public lbkld::SimulationModel {
 public:
  std::string name() const override { return "gaussian_location"; }
  std::size_t theta_dim() const override { return 1; }
  std::size_t dim_y(const DesignPoint&) const override { return 1; }
  void validate_design(const DesignPoint& design) const override {
    if (design.size() != 1) throw std::domain_error("scalar design expected");
  }
  void prior_sample(RngStream& rng, std::span<double> theta) const override {
    theta[0] = rng.normal();
  }
  void simulate(std::span<const double> theta, const DesignPoint&,
                RngStream& rng, std::span<double> y) const override {
    y[0] = theta[0] + rng.normal();
  }
  bool has_log_likelihood() const override { return true; }
  double log_likelihood(std::span<const double> y,
                        std::span<const double> theta,
                        const DesignPoint&) const override {
    double diff = y[0] - theta[0];
    return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * diff * diff;
  }
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_entropy_oracle() {
  Criterion c(1);
  const std::size_t n = 5000, num_seeds = 20, k = 3;
  double normal_1d = 0.0, uniform_1d = 0.0, normal_2d = 0.0;
  std::vector<double> buf;
  for (std::size_t s = 0; s < num_seeds; ++s) {
    RngStream rng(100 + s);
    buf.resize(n);
    for (double& v : buf) v = rng.normal();
    normal_1d += lbkld::knn_entropy(buf.data(), n, 1, k).value;
    for (double& v : buf) v = rng.uniform();
    uniform_1d += lbkld::knn_entropy(buf.data(), n, 1, k).value;
    buf.resize(2 * n);
    for (double& v : buf) v = rng.normal();
    normal_2d += lbkld::knn_entropy(buf.data(), n, 2, k).value;
  }
  normal_1d /= num_seeds;
  uniform_1d /= num_seeds;
  normal_2d /= num_seeds;
  const double gauss = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  bool ok = std::abs(normal_1d - gauss) <= 0.05 &&
            std::abs(uniform_1d) <= 0.05 &&
            std::abs(normal_2d - 2.0 * gauss) <= 0.08 && c.elapsed() < 10.0;
  c.finish(ok, "nearest-neighbor entropy matches closed forms",
           fmt("normal %.4f vs %.4f, uniform %.4f vs 0, 2-d %.4f vs %.4f",
               normal_1d, gauss, uniform_1d, normal_2d, 2.0 * gauss));
}

void criterion_analytic_equality() {
  Criterion c(2);
  GaussianLocationModel model;
  DesignPoint d{0.0};
  const std::size_t workers = lbkld::default_workers();

  lbkld::LbkldConfig lc;
  lc.n = 5000;
  lc.num_groups = 1;
  lc.min_group = 10;
  lc.replications = 20;
  UtilityEstimate lower = lbkld::lbkld_estimate(model, d, lc, RngStream(201),
                                                workers);

  lbkld::NestedMcConfig nc;
  nc.n = 10000;
  nc.n_inner = 1000;
  UtilityEstimate nested = lbkld::nested_mc_kld(model, d, nc, RngStream(202),
                                                workers);

  const double target = 0.5 * std::log(2.0);
  bool ok = std::abs(lower.value - target) <= 0.05 &&
            std::abs(nested.value - target) <= 0.05 &&
            std::abs(lower.value - nested.value) <=
                2.0 * combined_se(lower.std_error, nested.std_error);
  c.finish(ok, "location model hits the analytic utility",
           fmt("bound %.4f, double-loop %.4f, target %.4f", lower.value,
               nested.value, target));
}

void criterion_bound_direction() {
  Criterion c(3);
  lbkld::ToyModel toy;
  const std::size_t workers = lbkld::default_workers();
  const double ds[] = {2, 5, 10, 20, 50, 100};

  lbkld::LbkldConfig lc;
  lc.n = 10000;
  lc.num_groups = 5;
  lc.min_group = 10;
  lc.replications = 20;
  lbkld::NestedMcConfig nc;
  nc.n = 20000;
  nc.n_inner = 1000;

  // Slack must stay nonnegative: the bound below the double-loop value,
  // the partitioned bound above the unpartitioned one, both with a
  // two-combined-SE allowance.  The partition comparison shares a stream.
  double worst_upper = 1e300, worst_refine = 1e300;
  for (double d : ds) {
    DesignPoint dp{d};
    std::uint64_t seed = 300 + static_cast<std::uint64_t>(d);
    UtilityEstimate part = lbkld::lbkld_estimate(toy, dp, lc, RngStream(seed),
                                                 workers);
    UtilityEstimate plain = lbkld::lbkld_no_partition(toy, dp, lc,
                                                      RngStream(seed), workers);
    UtilityEstimate nested = lbkld::nested_mc_kld(toy, dp, nc,
                                                  RngStream(seed + 60),
                                                  workers);
    worst_upper = std::min(
        worst_upper, nested.value - part.value +
                         2.0 * combined_se(nested.std_error, part.std_error));
    worst_refine = std::min(
        worst_refine, part.value - plain.value +
                          2.0 * combined_se(part.std_error, plain.std_error));
  }
  bool ok = worst_upper >= 0.0 && worst_refine >= 0.0;
  c.finish(ok, "bound sits below the double-loop value, partition refines",
           fmt("min slack to double-loop %.4f, min partition gain %.4f",
               worst_upper, worst_refine));
}

void criterion_scalar_optima() {
  Criterion c(4);
  lbkld::ToyModel toy;
  const std::size_t workers = lbkld::default_workers();
  std::vector<DesignPoint> grid =
      lbkld::enumerate_designs({lbkld::ScalarInterval{2.0, 100.0, 25}});

  lbkld::UtilityFn bound_fn = [&toy](const DesignPoint& d, RngStream rng) {
    lbkld::LbkldConfig cfg;
    cfg.n = 10000;
    cfg.num_groups = 5;
    cfg.min_group = 10;
    cfg.replications = 20;
    return lbkld::lbkld_estimate(toy, d, cfg, rng);
  };
  lbkld::SweepResult bound = lbkld::sweep(grid, bound_fn, RngStream(400),
                                          workers);
  double bound_arg = bound.rows[bound.argmax_index].design[0];

  // The precision baseline is heavy-tailed at large d (rare synthetic
  // datasets with near-singular accepted covariance dominate the mean), so
  // every design is scored from the same stream: paired draws keep the
  // argmax out of the tail noise.  A large fresh pool per dataset keeps
  // the acceptance window below the simulation noise, which is what lets
  // the precision keep growing toward the upper boundary.
  lbkld::AbcConfig pcfg;
  pcfg.n_sim = 100000;
  pcfg.n_keep = 20;
  pcfg.n_outer = 1600;
  pcfg.reuse_pool = false;
  double prec_best = -1.0, prec_arg = 0.0;
  for (const DesignPoint& d : grid) {
    UtilityEstimate u = lbkld::d_posterior_precision(toy, d, pcfg,
                                                     RngStream(55), workers);
    if (u.value > prec_best) {
      prec_best = u.value;
      prec_arg = d[0];
    }
  }

  // The two utilities disagree: the bound peaks at small replicate counts,
  // the precision baseline runs off to the top decile of the interval.
  bool ok = bound_arg >= 3.0 && bound_arg <= 8.0 && prec_arg >= 90.2;
  c.finish(ok, "scalar sweep optima land where expected",
           fmt("bound argmax %.2f in [3,8], precision argmax %.2f >= 90.2",
               bound_arg, prec_arg));
}

void criterion_posterior_shape() {
  Criterion c(5);
  lbkld::ToyModel toy;

  auto accepted_thetas = [&toy](double design, std::uint64_t sim_seed,
                                std::uint64_t pool_seed) {
    DesignPoint dp{design};
    double theta_true = 0.5;
    double y_obs = 0.0;
    RngStream sim_rng(sim_seed);
    toy.simulate(std::span<const double>(&theta_true, 1), dp, sim_rng,
                 std::span<double>(&y_obs, 1));
    lbkld::AbcPool pool = lbkld::abc_make_pool(toy, dp, 100000,
                                               RngStream(pool_seed));
    lbkld::SampleBatch kept =
        lbkld::abc_rejection(pool, std::span<const double>(&y_obs, 1), 1000);
    std::vector<double> thetas(kept.data.begin(), kept.data.end());
    return thetas;
  };

  std::vector<double> narrow = accepted_thetas(5.0, 500, 501);
  std::vector<double> wide = accepted_thetas(100.0, 502, 503);

  // Histogram over [0,1]: one mode below 0.2, one above 0.25, and the
  // bins between the two peaks nearly empty.
  const std::size_t bins = 50;
  std::vector<int> hist(bins, 0);
  for (double t : narrow) {
    auto b = static_cast<std::size_t>(std::min(t, 0.9999) * bins);
    ++hist[b];
  }
  std::size_t low_peak = 0, high_peak = bins / 4;
  for (std::size_t b = 1; b < bins / 5; ++b) {
    if (hist[b] > hist[low_peak]) low_peak = b;
  }
  for (std::size_t b = bins / 4 + 1; b < bins; ++b) {
    if (hist[b] > hist[high_peak]) high_peak = b;
  }
  int valley = hist[low_peak];
  for (std::size_t b = low_peak + 1; b < high_peak; ++b) {
    valley = std::min(valley, hist[b]);
  }
  int smaller_mode = std::min(hist[low_peak], hist[high_peak]);
  bool bimodal = smaller_mode > 0 && valley * 2 < smaller_mode;

  double narrow_iqr =
      percentile(narrow, 0.75) - percentile(narrow, 0.25);
  double wide_iqr = percentile(wide, 0.75) - percentile(wide, 0.25);
  bool ok = bimodal && wide_iqr >= 1.5 * narrow_iqr;
  c.finish(ok, "rejection posterior splits then diffuses across designs",
           fmt("modes %d/%d valley %d, iqr %.3f vs %.3f", hist[low_peak],
               hist[high_peak], valley, narrow_iqr, wide_iqr));
}

void criterion_single_time_design() {
  Criterion c(6);
  lbkld::AphidModel model;
  const std::size_t workers = lbkld::default_workers();
  std::vector<DesignPoint> grid =
      lbkld::enumerate_designs({lbkld::TimeBox{1, 0.0, 50.0, 1.0}});

  lbkld::UtilityFn bound_fn = [&model](const DesignPoint& d, RngStream rng) {
    lbkld::LbkldConfig cfg;
    cfg.n = 10000;
    cfg.num_groups = 5;
    cfg.min_group = 10;
    cfg.replications = 20;
    return lbkld::lbkld_estimate(model, d, cfg, rng);
  };
  lbkld::SweepResult bound = lbkld::sweep(grid, bound_fn, RngStream(600),
                                          workers);
  double bound_arg = bound.rows[bound.argmax_index].design[0];

  lbkld::UtilityFn precision_fn = [&model](const DesignPoint& d,
                                           RngStream rng) {
    lbkld::AbcConfig cfg;
    cfg.n_sim = 10000;
    cfg.n_keep = 100;
    cfg.n_outer = 100;
    return lbkld::d_posterior_precision(model, d, cfg, rng);
  };
  lbkld::SweepResult prec = lbkld::sweep(grid, precision_fn, RngStream(601),
                                         workers);
  double prec_arg = prec.rows[prec.argmax_index].design[0];

  bool ok = std::abs(bound_arg - 21.0) <= 2.0 &&
            std::abs(prec_arg - 21.0) <= 2.0;
  c.finish(ok, "single observation time lands at the known optimum",
           fmt("bound argmax t=%.0f, precision argmax t=%.0f, want 21+-2",
               bound_arg, prec_arg));
}

void criterion_pair_ranking() {
  Criterion c(7);
  lbkld::RickerModel model;
  const std::size_t workers = lbkld::default_workers();
  std::vector<DesignPoint> pairs =
      lbkld::enumerate_designs({lbkld::IndexPairs{13}});

  auto rank_of = [&pairs](const lbkld::SweepResult& res,
                          const DesignPoint& target) {
    double target_value = 0.0;
    for (const lbkld::SweepRow& row : res.rows) {
      if (row.design == target) target_value = row.estimate.value;
    }
    std::size_t rank = 1;
    for (const lbkld::SweepRow& row : res.rows) {
      if (row.estimate.value > target_value) ++rank;
    }
    return rank;
  };

  lbkld::UtilityFn bound_fn = [&model](const DesignPoint& d, RngStream rng) {
    lbkld::LbkldConfig cfg;
    cfg.n = 5000;
    cfg.num_groups = 5;
    cfg.min_group = 50;
    cfg.replications = 10;
    return lbkld::lbkld_estimate(model, d, cfg, rng);
  };
  lbkld::SweepResult bound = lbkld::sweep(pairs, bound_fn, RngStream(700),
                                          workers);
  std::size_t bound_rank = rank_of(bound, DesignPoint{1, 2});

  lbkld::UtilityFn precision_fn = [&model](const DesignPoint& d,
                                           RngStream rng) {
    lbkld::AbcConfig cfg;
    cfg.n_sim = 10000;
    cfg.n_keep = 100;
    cfg.n_outer = 50;
    return lbkld::d_posterior_precision(model, d, cfg, rng);
  };
  // The precision ranking at these settings stably prefers the two pairs
  // that carry the series mean: the argmax lands on (1,3) or (1,2), and
  // (1,2) stays in the top three of both rankings.
  lbkld::SweepResult prec = lbkld::sweep(pairs, precision_fn, RngStream(701),
                                         workers);
  std::size_t prec_rank = rank_of(prec, DesignPoint{1, 2});
  const DesignPoint& prec_best = prec.rows[prec.argmax_index].design;
  bool argmax_mean_pair =
      prec_best == DesignPoint{1, 3} || prec_best == DesignPoint{1, 2};

  bool ok = bound_rank <= 3 && prec_rank <= 3 && argmax_mean_pair;
  c.finish(ok, "pair sweeps agree on the mean-bearing designs",
           fmt("bound puts (1,2) at rank %zu, precision at rank %zu with "
               "argmax (%.0f,%.0f)",
               bound_rank, prec_rank, prec_best[0], prec_best[1]));
}

void criterion_inference_study() {
  Criterion c(8);
  lbkld::RickerModel model;
  const std::size_t workers = lbkld::default_workers();
  lbkld::AbcConfig cfg;
  cfg.n_sim = 10000;
  cfg.n_keep = 100;
  cfg.n_outer = 200;

  // Same seed for both designs: trial truths match, so the comparison is
  // paired.
  lbkld::InferenceStudy mean_pair = lbkld::replicate_inference(
      model, DesignPoint{1, 2}, cfg, RngStream(800), workers);
  lbkld::InferenceStudy other_pair = lbkld::replicate_inference(
      model, DesignPoint{2, 3}, cfg, RngStream(800), workers);

  double a0 = mean_pair.mse[0], b0 = other_pair.mse[0];
  double a1 = mean_pair.mse[1], b1 = other_pair.mse[1];
  double a2 = mean_pair.mse[2], b2 = other_pair.mse[2];
  bool ok = a0 < b0 && a1 < b1 &&
            std::abs(a2 - b2) <= 0.25 * std::max(a2, b2);
  c.finish(ok, "repeated inference favors the better statistic pair",
           fmt("mse (1,2) vs (2,3): growth %.4f/%.4f, peak %.4f/%.4f, "
               "noise %.4f/%.4f",
               a0, b0, a1, b1, a2, b2));
}

void criterion_clustering_constraints() {
  Criterion c(9);
  RngStream gen(900);
  bool ok = true;
  std::string why = "all 1000 instances clean";
  for (std::size_t i = 0; i < 1000 && ok; ++i) {
    std::size_t n = 20 + gen.uniform_index(181);
    std::size_t dim = 1 + gen.uniform_index(4);
    std::size_t clusters = 1 + gen.uniform_index(6);
    std::size_t min_size = 1 + gen.uniform_index(n / clusters);
    if (i % 100 == 99) n = clusters * min_size;  // tight feasibility

    // Blobby data so Lloyd iterations actually move.
    std::size_t blobs = 1 + gen.uniform_index(4);
    std::vector<double> centers(blobs * dim);
    for (double& v : centers) v = gen.uniform(0.0, 10.0);
    std::vector<double> data(n * dim);
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t b = gen.uniform_index(blobs);
      for (std::size_t d = 0; d < dim; ++d) {
        data[p * dim + d] = centers[b * dim + d] + gen.normal(0.0, 0.7);
      }
    }

    RngStream first(9000 + i), second(9000 + i);
    lbkld::KmeansResult r1 = lbkld::constrained_kmeans(data.data(), n, dim,
                                                       clusters, min_size,
                                                       first);
    lbkld::KmeansResult r2 = lbkld::constrained_kmeans(data.data(), n, dim,
                                                       clusters, min_size,
                                                       second);

    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t label : r1.labels) {
      if (label >= clusters) {
        ok = false;
        why = fmt("instance %zu: label out of range", i);
        break;
      }
      ++counts[label];
    }
    for (std::size_t cluster = 0; ok && cluster < clusters; ++cluster) {
      if (counts[cluster] < min_size) {
        ok = false;
        why = fmt("instance %zu: cluster %zu has %zu < %zu", i, cluster,
                  counts[cluster], min_size);
      }
    }
    if (ok && (r1.labels != r2.labels || r1.centroids != r2.centroids ||
               r1.sse_trace != r2.sse_trace)) {
      ok = false;
      why = fmt("instance %zu: rerun differed", i);
    }
    for (std::size_t t = 1; ok && t < r1.sse_trace.size(); ++t) {
      if (r1.sse_trace[t] >
          r1.sse_trace[t - 1] + 1e-9 * std::max(1.0, r1.sse_trace[0])) {
        ok = false;
        why = fmt("instance %zu: sse rose at step %zu", i, t);
      }
    }
  }
  c.finish(ok, "constrained clustering holds sizes, order, determinism", why);
}

void criterion_determinism_accounting() {
  Criterion c(10);
  lbkld::ToyModel toy;
  lbkld::RickerModel ricker;
  lbkld::AphidModel aphid;
  struct Case {
    const lbkld::SimulationModel* model;
    DesignPoint design;
  };
  const Case cases[] = {
      {&toy, DesignPoint{5.0}},
      {&ricker, DesignPoint{1, 2}},
      {&aphid, DesignPoint{20.0}},
  };

  bool ok = true;
  std::string why = "all reruns bit-identical, bound accounting exact";
  auto same = [](const UtilityEstimate& a, const UtilityEstimate& b) {
    return a.value == b.value && a.std_error == b.std_error &&
           a.n_sims == b.n_sims && a.degenerate == b.degenerate;
  };

  std::uint64_t seed = 1000;
  for (const Case& kase : cases) {
    ++seed;
    lbkld::LbkldConfig lc;
    lc.n = 600;
    lc.num_groups = 3;
    lc.min_group = 10;
    lc.replications = 4;
    UtilityEstimate p1 = lbkld::lbkld_estimate(*kase.model, kase.design, lc,
                                               RngStream(seed));
    UtilityEstimate p2 = lbkld::lbkld_estimate(*kase.model, kase.design, lc,
                                               RngStream(seed));
    UtilityEstimate u1 = lbkld::lbkld_no_partition(*kase.model, kase.design,
                                                   lc, RngStream(seed));
    UtilityEstimate u2 = lbkld::lbkld_no_partition(*kase.model, kase.design,
                                                   lc, RngStream(seed));
    lbkld::AbcConfig ac;
    ac.n_sim = 2000;
    ac.n_keep = 50;
    ac.n_outer = 10;
    UtilityEstimate d1 = lbkld::d_posterior_precision(*kase.model, kase.design,
                                                      ac, RngStream(seed));
    UtilityEstimate d2 = lbkld::d_posterior_precision(*kase.model, kase.design,
                                                      ac, RngStream(seed));
    if (!same(p1, p2) || !same(u1, u2) || !same(d1, d2)) {
      ok = false;
      why = fmt("%s: rerun differed", kase.model->name().c_str());
    }
    std::uint64_t expected = 3ull * lc.n * lc.replications;
    if (p1.n_sims != expected || u1.n_sims != expected) {
      ok = false;
      why = fmt("%s: n_sims %llu, expected %llu", kase.model->name().c_str(),
                static_cast<unsigned long long>(p1.n_sims),
                static_cast<unsigned long long>(expected));
    }
  }

  lbkld::NestedMcConfig nc;
  nc.n = 2000;
  nc.n_inner = 200;
  UtilityEstimate n1 = lbkld::nested_mc_kld(toy, DesignPoint{5.0}, nc,
                                            RngStream(1010));
  UtilityEstimate n2 = lbkld::nested_mc_kld(toy, DesignPoint{5.0}, nc,
                                            RngStream(1010));
  if (!same(n1, n2)) {
    ok = false;
    why = "double-loop rerun differed";
  }
  c.finish(ok, "same-seed reruns identical, simulation counts exact", why);
}

void criterion_posterior_gaussianity() {
  Criterion c(11);
  lbkld::AphidModel model;
  DesignPoint design{13.8, 19.1, 24.5, 30.6};

  // Observed counts at the prior-mean rates, then the usual rejection step.
  std::vector<double> theta_true = {0.246, 0.000136};
  std::vector<double> y_obs(design.size());
  RngStream sim_rng(1100);
  model.simulate(theta_true, design, sim_rng, y_obs);
  lbkld::AbcPool pool = lbkld::abc_make_pool(model, design, 20000,
                                             RngStream(1101));
  lbkld::SampleBatch kept = lbkld::abc_rejection(pool, y_obs, 500);

  std::vector<double> birth(kept.n), death(kept.n);
  for (std::size_t i = 0; i < kept.n; ++i) {
    birth[i] = kept.at(i, 0);
    death[i] = kept.at(i, 1);
  }
  ShapeStats b = shape_stats(birth);
  ShapeStats d = shape_stats(death);
  bool ok = std::abs(b.skewness) < 0.5 && std::abs(d.skewness) < 0.5 &&
            b.excess_kurtosis > -1.0 && b.excess_kurtosis < 1.0 &&
            d.excess_kurtosis > -1.0 && d.excess_kurtosis < 1.0;
  c.finish(ok, "four-time posterior marginals are near-Gaussian",
           fmt("skew %.3f/%.3f, excess kurtosis %.3f/%.3f", b.skewness,
               d.skewness, b.excess_kurtosis, d.excess_kurtosis));
}

}  // namespace

// With no arguments every criterion runs; numeric arguments select a
// subset (e.g. `acceptance 2 5 11`) so a single slow criterion can be
// rechecked without the full hour.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto wanted = [&only](int n) {
    return only.empty() ||
           std::find(only.begin(), only.end(), n) != only.end();
  };

  if (wanted(1)) criterion_entropy_oracle();
  if (wanted(2)) criterion_analytic_equality();
  if (wanted(3)) criterion_bound_direction();
  if (wanted(4)) criterion_scalar_optima();
  if (wanted(5)) criterion_posterior_shape();
  if (wanted(6)) criterion_single_time_design();
  if (wanted(7)) criterion_pair_ranking();
  if (wanted(8)) criterion_inference_study();
  if (wanted(9)) criterion_clustering_constraints();
  if (wanted(10)) criterion_determinism_accounting();
  if (wanted(11)) criterion_posterior_gaussianity();
  if (failures > 0) {
    std::fprintf(stderr, "acceptance: %d criteria failed\n", failures);
  }
  return failures;
}
