#include "lbkld/models.hpp"

#include <cmath>
#include <stdexcept>

namespace lbkld {

double SimulationModel::log_likelihood(std::span<const double>,
                                       std::span<const double>,
                                       const DesignPoint&) const {
  throw std::logic_error("model '" + name() +
                         "' has no tractable likelihood");
}

std::vector<double> SimulationModel::output_lattice(
    const DesignPoint& design) const {
  return std::vector<double>(dim_y(design), 0.0);
}

ToyModel::ToyModel(double noise_sd) : noise_sd_(noise_sd) {
  if (!(noise_sd > 0.0)) {
    throw std::invalid_argument("ToyModel: noise_sd must be positive");
  }
}

std::size_t ToyModel::dim_y(const DesignPoint& design) const {
  validate_design(design);
  return 1;
}

void ToyModel::validate_design(const DesignPoint& design) const {
  if (design.size() != 1) {
    throw std::domain_error("toy design must be a single scalar d");
  }
  const double d = design[0];
  if (!(d >= 2.0 && d <= 100.0)) {
    throw std::domain_error("toy design d must lie in [2, 100]");
  }
}

void ToyModel::prior_sample(RngStream& rng, std::span<double> theta) const {
  theta[0] = rng.uniform();
}

double ToyModel::mean_response(double theta, double d) {
  // B(2,d) = Gamma(2)Gamma(d)/Gamma(d+2) = 1/(d(d+1))
  return theta * std::pow(1.0 - theta, d - 1.0) * d * (d + 1.0);
}

void ToyModel::simulate(std::span<const double> theta,
                        const DesignPoint& design, RngStream& rng,
                        std::span<double> y) const {
  validate_design(design);
  if (!(theta[0] >= 0.0 && theta[0] <= 1.0)) {
    throw std::domain_error("toy theta must lie in [0, 1]");
  }
  const double g = mean_response(theta[0], design[0]);
  const double e1 = noise_sd_ * rng.normal();
  const double e2 = noise_sd_ * rng.normal();
  y[0] = g * (1.0 + e1) + e2;
}

double ToyModel::log_likelihood(std::span<const double> y,
                                std::span<const double> theta,
                                const DesignPoint& design) const {
  validate_design(design);
  const double g = mean_response(theta[0], design[0]);
  const double var = noise_sd_ * noise_sd_ * (1.0 + g * g);
  const double diff = y[0] - g;
  return -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
}

}  // namespace lbkld
