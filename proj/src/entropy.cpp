#include "lbkld/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "lbkld/kdtree.hpp"
#include "lbkld/kernels.hpp"

namespace lbkld {

namespace {

constexpr std::size_t kKdTreeMaxDim = 10;  // kd-trees degrade above this
constexpr double kFloorFraction = 1e-12;

void validate(const double* data, std::size_t n, std::size_t dim, std::size_t k) {
  if (dim == 0) throw std::invalid_argument("knn_entropy: dim must be >= 1");
  if (k == 0) throw std::invalid_argument("knn_entropy: k must be >= 1");
  if (n < k + 1) throw std::invalid_argument("knn_entropy: need n >= k+1 samples");
  for (std::size_t i = 0; i < n * dim; ++i)
    if (!std::isfinite(data[i]))
      throw std::invalid_argument("knn_entropy: non-finite sample entry");
}

double max_coordinate_range(const double* data, std::size_t n, std::size_t dim) {
  double widest = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double lo = data[d], hi = data[d];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, data[i * dim + d]);
      hi = std::max(hi, data[i * dim + d]);
    }
    widest = std::max(widest, hi - lo);
  }
  return widest;
}

// k-th smallest under (distance, index) lexicographic order, full scan.
double brute_knn_sqdist(const SoaPoints& pts, const double* data,
                        std::size_t query_index, std::size_t k,
                        std::vector<double>& dists,
                        std::vector<std::uint32_t>& idx) {
  const std::size_t n = pts.n;
  dists.resize(n);
  kernels::squared_distances(pts, 0, n, data + query_index * pts.dim, dists.data());
  idx.resize(n);
  std::uint32_t m = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    if (i != query_index) idx[m++] = i;
  idx.resize(m);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    return dists[a] < dists[b] || (dists[a] == dists[b] && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), less);
  return dists[idx[k - 1]];
}

}  // namespace

double log_unit_ball_volume(std::size_t dim) {
  const double half = 0.5 * static_cast<double>(dim);
  return half * std::log(M_PI) - std::lgamma(half + 1.0);
}

EntropyEstimate knn_entropy(const double* data, std::size_t n, std::size_t dim,
                            std::size_t k) {
  validate(data, n, dim, k);

  // The comparisons below run on squared distances, so the floor must stay
  // large enough to square without underflowing to zero (all-identical
  // samples would otherwise come back -inf).
  double floor = kFloorFraction * max_coordinate_range(data, n, dim);
  floor = std::max(floor, 1e-150);
  const double floor_sq = floor * floor;

  double sum_log_rho = 0.0;
  if (dim <= kKdTreeMaxDim) {
    KdTree tree(data, n, dim);
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = std::max(tree.knn_sqdist(data + i * dim, k, i), floor_sq);
      sum_log_rho += 0.5 * std::log(d2);
    }
  } else {
    SoaPoints pts(data, n, dim);
    std::vector<double> dists;
    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = std::max(brute_knn_sqdist(pts, data, i, k, dists, idx), floor_sq);
      sum_log_rho += 0.5 * std::log(d2);
    }
  }

  EntropyEstimate est;
  est.n = n;
  est.k = k;
  est.dim = dim;
  est.value = boost::math::digamma(static_cast<double>(n)) -
              boost::math::digamma(static_cast<double>(k)) +
              log_unit_ball_volume(dim) +
              static_cast<double>(dim) / static_cast<double>(n) * sum_log_rho;
  return est;
}

EntropyEstimate knn_entropy(const SampleBatch& samples, std::size_t k) {
  return knn_entropy(samples.data.data(), samples.n, samples.dim, k);
}

double knn_query(const double* data, std::size_t n, std::size_t dim,
                 std::size_t query_index, std::size_t k) {
  validate(data, n, dim, k);
  if (query_index >= n) throw std::invalid_argument("knn_query: bad query index");
  if (dim <= kKdTreeMaxDim) {
    KdTree tree(data, n, dim);
    return std::sqrt(tree.knn_sqdist(data + query_index * dim, k, query_index));
  }
  SoaPoints pts(data, n, dim);
  std::vector<double> dists;
  std::vector<std::uint32_t> idx;
  return std::sqrt(brute_knn_sqdist(pts, data, query_index, k, dists, idx));
}

void jitter(SampleBatch& samples, double scale, RngStream& rng) {
  if (scale < 0.0) throw std::invalid_argument("jitter: negative scale");
  for (double& v : samples.data) v += scale * (rng.uniform() - 0.5);
}

void jitter_columns(SampleBatch& samples, std::span<const double> scales,
                    RngStream& rng) {
  if (scales.size() != samples.dim)
    throw std::invalid_argument("jitter_columns: scale count != dim");
  for (double s : scales)
    if (s < 0.0) throw std::invalid_argument("jitter_columns: negative scale");
  for (std::size_t i = 0; i < samples.n; ++i)
    for (std::size_t d = 0; d < samples.dim; ++d)
      samples.at(i, d) += scales[d] * (rng.uniform() - 0.5);
}

}  // namespace lbkld
