#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "lbkld/models.hpp"

namespace lbkld {

namespace {

// Regression tolerance: coefficients are zeroed instead of solved once the
// Gram matrix condition number passes this, so degenerate series (constant,
// all-zero) stay finite.
constexpr double kMaxGramCondition = 1e12;

void solve_or_zero(const Eigen::MatrixXd& x, const Eigen::VectorXd& rhs,
                   double* out) {
  const Eigen::Index k = x.cols();
  const Eigen::MatrixXd gram = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(k - 1);
  if (!(lo > 0.0) || hi > kMaxGramCondition * lo) {
    for (Eigen::Index i = 0; i < k; ++i) out[i] = 0.0;
    return;
  }
  const Eigen::VectorXd beta = gram.ldlt().solve(x.transpose() * rhs);
  for (Eigen::Index i = 0; i < k; ++i) out[i] = beta(i);
}

}  // namespace

std::vector<long> ricker_simulate_series(std::span<const double> theta,
                                         std::size_t horizon,
                                         double initial_state,
                                         RngStream& rng) {
  if (theta.size() != 3) {
    throw std::domain_error("ricker theta must be (log r, phi, sigma)");
  }
  const double r = std::exp(theta[0]);
  const double phi = theta[1];
  const double sigma = theta[2];
  if (phi < 0.0 || sigma < 0.0) {
    throw std::domain_error("ricker phi and sigma must be nonnegative");
  }
  std::vector<long> series(horizon);
  double state = initial_state;
  for (std::size_t t = 0; t < horizon; ++t) {
    series[t] = rng.poisson(phi * state);
    if (t + 1 < horizon) {
      const double shock = sigma * rng.normal();
      state = r * state * std::exp(-state + shock);
    }
  }
  return series;
}

std::array<double, kNumRickerStats> ricker_statistics(
    std::span<const long> series) {
  const std::size_t n = series.size();
  if (n < 7) {
    throw std::invalid_argument(
        "ricker_statistics: need a series of length >= 7");
  }
  std::array<double, kNumRickerStats> stats{};

  double mean = 0.0;
  std::size_t zeros = 0;
  for (const long v : series) {
    mean += static_cast<double>(v);
    if (v == 0) ++zeros;
  }
  mean /= static_cast<double>(n);
  stats[0] = mean;
  stats[1] = static_cast<double>(zeros);

  for (std::size_t lag = 0; lag <= 5; ++lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
      acc += (static_cast<double>(series[t]) - mean) *
             (static_cast<double>(series[t + lag]) - mean);
    }
    stats[2 + lag] = acc / static_cast<double>(n);
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(n - 1);

  // next value regressed on (1, u, u^2) where u is the step y_{t+1} - y_t
  {
    Eigen::MatrixXd x(rows, 3);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
      const double u = static_cast<double>(series[t + 1] - series[t]);
      x(t, 0) = 1.0;
      x(t, 1) = u;
      x(t, 2) = u * u;
      rhs(t) = static_cast<double>(series[t + 1]);
    }
    solve_or_zero(x, rhs, &stats[8]);
  }

  // y_{t+1}^0.3 regressed on (y_t^0.3, y_t^0.6), no intercept; pow(0, 0.3)
  // is 0 so zero counts are harmless
  {
    Eigen::MatrixXd x(rows, 2);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
      const double prev = static_cast<double>(series[t]);
      x(t, 0) = std::pow(prev, 0.3);
      x(t, 1) = std::pow(prev, 0.6);
      rhs(t) = std::pow(static_cast<double>(series[t + 1]), 0.3);
    }
    solve_or_zero(x, rhs, &stats[11]);
  }

  return stats;
}

RickerModel::RickerModel(std::size_t horizon, double initial_state)
    : horizon_(horizon), initial_state_(initial_state) {
  if (horizon_ < 7) {
    throw std::invalid_argument(
        "RickerModel: horizon must be >= 7 for the summary statistics");
  }
  if (!(initial_state_ > 0.0)) {
    throw std::invalid_argument("RickerModel: initial state must be positive");
  }
}

std::size_t RickerModel::dim_y(const DesignPoint& design) const {
  validate_design(design);
  return 2;
}

void RickerModel::validate_design(const DesignPoint& design) const {
  if (design.size() != 2) {
    throw std::domain_error(
        "ricker design must be a pair (i, j) of statistic indices");
  }
  const double i = design[0];
  const double j = design[1];
  if (i != std::floor(i) || j != std::floor(j) || i < 1.0 || j <= i ||
      j > static_cast<double>(kNumRickerStats)) {
    throw std::domain_error(
        "ricker design indices must be integers with 1 <= i < j <= 13");
  }
}

void RickerModel::prior_sample(RngStream& rng, std::span<double> theta) const {
  theta[0] = rng.uniform(3.0, 5.0);   // log r
  theta[1] = rng.uniform(5.0, 15.0);  // phi
  theta[2] = rng.uniform(0.0, 0.6);   // sigma
}

void RickerModel::simulate(std::span<const double> theta,
                           const DesignPoint& design, RngStream& rng,
                           std::span<double> y) const {
  validate_design(design);
  const std::vector<long> series =
      ricker_simulate_series(theta, horizon_, initial_state_, rng);
  const std::array<double, kNumRickerStats> stats = ricker_statistics(series);
  y[0] = stats[static_cast<std::size_t>(design[0]) - 1];
  y[1] = stats[static_cast<std::size_t>(design[1]) - 1];
}

std::vector<double> RickerModel::output_lattice(
    const DesignPoint& design) const {
  validate_design(design);
  // only the zero-count statistic is integer-valued
  std::vector<double> lattice(2, 0.0);
  if (design[0] == 2.0) lattice[0] = 1.0;
  if (design[1] == 2.0) lattice[1] = 1.0;
  return lattice;
}

}  // namespace lbkld
