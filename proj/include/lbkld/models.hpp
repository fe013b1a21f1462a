#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lbkld/batch.hpp"
#include "lbkld/rng.hpp"

namespace lbkld {

// Generative model seen by the estimators: prior draws and forward
// simulation, plus an exact log-likelihood where one exists.  Every
// operation is a pure function of its inputs and the rng stream, so calls
// are safe from concurrent workers holding independent streams.
class SimulationModel {
 public:
  virtual ~SimulationModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t theta_dim() const = 0;
  virtual std::size_t dim_y(const DesignPoint& design) const = 0;
  virtual void validate_design(const DesignPoint& design) const = 0;

  // Writes theta_dim() entries.
  virtual void prior_sample(RngStream& rng, std::span<double> theta) const = 0;

  // Writes dim_y(design) entries.
  virtual void simulate(std::span<const double> theta,
                        const DesignPoint& design, RngStream& rng,
                        std::span<double> y) const = 0;

  virtual bool has_log_likelihood() const { return false; }

  // log p(y | theta, design) in nats.  Throws unless
  // has_log_likelihood(); only the toy model is tractable.
  virtual double log_likelihood(std::span<const double> y,
                                std::span<const double> theta,
                                const DesignPoint& design) const;

  // Lattice spacing of each output coordinate, 0 for continuous ones.
  // Integer-valued coordinates (counts) get spacing 1; the entropy
  // estimators jitter those to break kNN ties.  Default: all continuous.
  virtual std::vector<double> output_lattice(const DesignPoint& design) const;
};

// y = G(theta,d)(1+e1) + e2 with e1, e2 ~ Normal(0, noise_sd^2) and
// G(theta,d) = theta (1-theta)^(d-1) / B(2,d).  Prior: theta ~ U(0,1).
// Design: scalar d in [2,100].  The likelihood is exact:
// y | theta, d ~ Normal(G, noise_sd^2 (1 + G^2)).
class ToyModel final : public SimulationModel {
 public:
  explicit ToyModel(double noise_sd = 0.05);

  std::string name() const override { return "toy"; }
  std::size_t theta_dim() const override { return 1; }
  std::size_t dim_y(const DesignPoint& design) const override;
  void validate_design(const DesignPoint& design) const override;
  void prior_sample(RngStream& rng, std::span<double> theta) const override;
  void simulate(std::span<const double> theta, const DesignPoint& design,
                RngStream& rng, std::span<double> y) const override;
  bool has_log_likelihood() const override { return true; }
  double log_likelihood(std::span<const double> y,
                        std::span<const double> theta,
                        const DesignPoint& design) const override;

  // G(theta,d); uses B(2,d) = 1/(d(d+1)), valid for real d.
  static double mean_response(double theta, double d);

 private:
  double noise_sd_;
};

inline constexpr std::size_t kNumRickerStats = 13;

// Latent Ricker map N_{t+1} = r N_t exp(-N_t + e_t), e_t ~ Normal(0,
// sigma^2), observed through Y_t ~ Poisson(phi N_t).  theta = (log r, phi,
// sigma).  Returns (Y_1, ..., Y_horizon) starting from N_1 =
// initial_state.
std::vector<long> ricker_simulate_series(std::span<const double> theta,
                                         std::size_t horizon,
                                         double initial_state, RngStream& rng);

// The 13 summary statistics of an observed series, in fixed order:
//   1     mean
//   2     number of zeros
//   3-8   autocovariances at lags 0..5, (1/T) sum (y_t - ybar)(y_{t+k} - ybar)
//   9-11  least-squares (a0, a1, a2) of y_{t+1} on (1, u, u^2), u = y_{t+1} - y_t
//   12-13 least-squares (b0, b1) of y_{t+1}^0.3 on (y_t^0.3, y_t^0.6), no
//         intercept, with 0^0.3 = 0
// Regressions whose Gram matrix has condition number above 1e12 return
// zero coefficients, so the vector is finite for any series.
std::array<double, kNumRickerStats> ricker_statistics(
    std::span<const long> series);

// Simulates a series and reports the two summary statistics the design
// selects.  Design: pair (i, j) of 1-based statistic indices, i < j.
// Prior: log r ~ U(3,5), phi ~ U(5,15), sigma ~ U(0,0.6).
class RickerModel final : public SimulationModel {
 public:
  explicit RickerModel(std::size_t horizon = 50, double initial_state = 1.0);

  std::string name() const override { return "ricker"; }
  std::size_t theta_dim() const override { return 3; }
  std::size_t dim_y(const DesignPoint& design) const override;
  void validate_design(const DesignPoint& design) const override;
  void prior_sample(RngStream& rng, std::span<double> theta) const override;
  void simulate(std::span<const double> theta, const DesignPoint& design,
                RngStream& rng, std::span<double> y) const override;
  std::vector<double> output_lattice(const DesignPoint& design) const override;

  std::size_t horizon() const { return horizon_; }

 private:
  std::size_t horizon_;
  double initial_state_;
};

// One exact jump-process path of the aphid birth-death model: from state
// (n, c), births (n+1, c+1) at rate lambda*n and deaths (n-1, c) at rate
// mu*n*c.  Records the state just before each requested time; once the
// total rate hits zero the state is frozen.  Times must be sorted
// ascending and nonnegative.
struct AphidPath {
  std::vector<long> n;  // live count at each requested time
  std::vector<long> c;  // cumulative count at each requested time
};
AphidPath aphid_simulate_counts(double lambda, double mu,
                                std::span<const double> times, RngStream& rng,
                                long n0 = 28, long c0 = 28);

// The live counts only (the model's observation vector).
std::vector<long> aphid_simulate(double lambda, double mu,
                                 std::span<const double> times, RngStream& rng,
                                 long n0 = 28, long c0 = 28);

// theta = (lambda, mu), bivariate normal prior with mean (0.246,
// 0.000136), sds (0.0079, 0.00002), covariance 5.8e-8; draws are rejected
// until both rates are positive (a ~1e-11 tail event).  Design: sorted
// sampling times in [0, 50]; the observation is (N(t_1), ..., N(t_k)).
class AphidModel final : public SimulationModel {
 public:
  AphidModel(long n0 = 28, long c0 = 28);

  std::string name() const override { return "aphid"; }
  std::size_t theta_dim() const override { return 2; }
  std::size_t dim_y(const DesignPoint& design) const override;
  void validate_design(const DesignPoint& design) const override;
  void prior_sample(RngStream& rng, std::span<double> theta) const override;
  void simulate(std::span<const double> theta, const DesignPoint& design,
                RngStream& rng, std::span<double> y) const override;
  std::vector<double> output_lattice(const DesignPoint& design) const override;

 private:
  long n0_;
  long c0_;
};

}  // namespace lbkld
