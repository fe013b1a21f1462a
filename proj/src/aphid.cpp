#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lbkld/models.hpp"

namespace lbkld {

namespace {

// Prior for (lambda, mu): bivariate normal, slightly correlated.
constexpr double kLambdaMean = 0.246;
constexpr double kMuMean = 0.000136;
constexpr double kLambdaSd = 0.0079;
constexpr double kMuSd = 0.00002;
constexpr double kRateCov = 5.8e-8;

}  // namespace

AphidPath aphid_simulate_counts(double lambda, double mu,
                                std::span<const double> times, RngStream& rng,
                                long n0, long c0) {
  if (lambda < 0.0 || mu < 0.0) {
    throw std::domain_error("aphid rates must be nonnegative");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::domain_error("aphid sampling times must be sorted ascending");
  }
  if (!times.empty() && times.front() < 0.0) {
    throw std::domain_error("aphid sampling times must be nonnegative");
  }

  AphidPath path;
  path.n.resize(times.size());
  path.c.resize(times.size());

  long n = n0;
  long c = c0;
  double t = 0.0;
  std::size_t next = 0;
  while (next < times.size()) {
    const double birth = lambda * static_cast<double>(n);
    const double death =
        mu * static_cast<double>(n) * static_cast<double>(c);
    const double total = birth + death;
    // extinct (n = 0) or frozen: the state never changes again
    if (!(total > 0.0)) break;
    const double t_event = t + rng.exponential(total);
    // requested times are observed with the state just before the event
    while (next < times.size() && times[next] <= t_event) {
      path.n[next] = n;
      path.c[next] = c;
      ++next;
    }
    if (next == times.size()) break;
    if (rng.uniform() * total < birth) {
      ++n;
      ++c;
    } else {
      --n;
    }
    t = t_event;
  }
  for (; next < times.size(); ++next) {
    path.n[next] = n;
    path.c[next] = c;
  }
  return path;
}

std::vector<long> aphid_simulate(double lambda, double mu,
                                 std::span<const double> times, RngStream& rng,
                                 long n0, long c0) {
  return aphid_simulate_counts(lambda, mu, times, rng, n0, c0).n;
}

AphidModel::AphidModel(long n0, long c0) : n0_(n0), c0_(c0) {
  if (n0_ < 0 || c0_ < 0) {
    throw std::invalid_argument("AphidModel: initial counts must be >= 0");
  }
}

std::size_t AphidModel::dim_y(const DesignPoint& design) const {
  validate_design(design);
  return design.size();
}

void AphidModel::validate_design(const DesignPoint& design) const {
  if (design.size() == 0) {
    throw std::domain_error("aphid design needs at least one sampling time");
  }
  if (!std::is_sorted(design.coords.begin(), design.coords.end())) {
    throw std::domain_error("aphid sampling times must be sorted ascending");
  }
  if (design.coords.front() < 0.0 || design.coords.back() > 50.0) {
    throw std::domain_error("aphid sampling times must lie in [0, 50]");
  }
}

void AphidModel::prior_sample(RngStream& rng, std::span<double> theta) const {
  // Cholesky factor of the prior covariance
  const double l11 = kLambdaSd;
  const double l21 = kRateCov / kLambdaSd;
  const double l22 = std::sqrt(kMuSd * kMuSd - l21 * l21);
  for (;;) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double lambda = kLambdaMean + l11 * z1;
    const double mu = kMuMean + l21 * z1 + l22 * z2;
    // negative rates are a ~7-sigma tail; redraw keeps the prior intact
    if (lambda > 0.0 && mu > 0.0) {
      theta[0] = lambda;
      theta[1] = mu;
      return;
    }
  }
}

void AphidModel::simulate(std::span<const double> theta,
                          const DesignPoint& design, RngStream& rng,
                          std::span<double> y) const {
  validate_design(design);
  const std::vector<long> counts =
      aphid_simulate(theta[0], theta[1], design.coords, rng, n0_, c0_);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    y[i] = static_cast<double>(counts[i]);
  }
}

std::vector<double> AphidModel::output_lattice(
    const DesignPoint& design) const {
  validate_design(design);
  return std::vector<double>(design.size(), 1.0);
}

}  // namespace lbkld
