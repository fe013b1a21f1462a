#include "lbkld/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "lbkld/kernels.hpp"

namespace lbkld {

namespace {

constexpr std::size_t kMaxIterations = 100;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

double point_sqdist(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return acc;
}

// k-means++ seeding: first seed uniform, each later seed drawn with
// probability proportional to the squared distance to the nearest seed so
// far.  Points at distance zero (duplicates of a seed) are never drawn
// unless every remaining point is one.
std::vector<double> kmeanspp_init(const double* pts, std::size_t n,
                                  std::size_t dim, std::size_t num_clusters,
                                  RngStream& rng) {
  std::vector<double> centroids(num_clusters * dim);
  const std::size_t first = rng.uniform_index(n);
  std::copy_n(pts + first * dim, dim, centroids.begin());

  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (std::size_t j = 1; j < num_clusters; ++j) {
    const double* prev = centroids.data() + (j - 1) * dim;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], point_sqdist(pts + i * dim, prev, dim));
      total += d2[i];
    }
    std::size_t pick = kNone;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
      if (pick == kNone) {
        // rounding pushed the walk past every bucket; take the last
        // positive-mass point
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    }
    if (pick == kNone) pick = rng.uniform_index(n);  // all points coincide
    std::copy_n(pts + pick * dim, dim, centroids.data() + j * dim);
  }
  return centroids;
}

// Nearest-centroid assignment.  Leaves the squared distance to the winning
// centroid in `best`; ties go to the lower label.
void assign_nearest(const SoaPoints& soa, const std::vector<double>& centroids,
                    std::size_t num_clusters, std::vector<double>& dist_buf,
                    std::vector<double>& best,
                    std::vector<std::uint32_t>& labels) {
  std::fill(best.begin(), best.end(),
            std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < num_clusters; ++l) {
    kernels::squared_distances(soa, 0, soa.n,
                               centroids.data() + l * soa.dim,
                               dist_buf.data());
    kernels::argmin_update(best.data(), labels.data(), dist_buf.data(),
                           static_cast<std::uint32_t>(l), soa.n);
  }
}

std::vector<std::size_t> cluster_sizes(const std::vector<std::uint32_t>& labels,
                                       std::size_t num_clusters) {
  std::vector<std::size_t> sizes(num_clusters, 0);
  for (const std::uint32_t l : labels) ++sizes[l];
  return sizes;
}

// Reseed every empty cluster at the point farthest from its own centroid,
// skipping points whose departure would empty the donor.  n >= num_clusters
// guarantees a donor of size >= 2 exists while any cluster is empty.
void repair_empty(const double* pts, std::size_t dim,
                  std::vector<double>& centroids,
                  std::vector<std::uint32_t>& labels,
                  std::vector<double>& best, std::vector<std::size_t>& sizes) {
  const std::size_t num_clusters = sizes.size();
  for (std::size_t l = 0; l < num_clusters; ++l) {
    if (sizes[l] > 0) continue;
    std::size_t far_idx = kNone;
    double far_d2 = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      if (best[i] > far_d2) {
        far_d2 = best[i];
        far_idx = i;
      }
    }
    if (far_idx == kNone) throw std::logic_error("repair_empty: no donor");
    --sizes[labels[far_idx]];
    labels[far_idx] = static_cast<std::uint32_t>(l);
    sizes[l] = 1;
    std::copy_n(pts + far_idx * dim, dim, centroids.begin() + l * dim);
    best[far_idx] = 0.0;
  }
}

// While any cluster is short of the floor, move in the outside point whose
// transfer raises the objective least (squared distance to the deficient
// centroid minus squared distance to its current one).  Donors never drop
// below the floor themselves, so total deficiency strictly decreases and
// the loop terminates; n >= num_clusters * min_size guarantees an eligible
// donor exists (some cluster must sit above the floor).
void repair_min_size(const SoaPoints& soa, const std::vector<double>& centroids,
                     std::size_t min_size, std::vector<double>& dist_buf,
                     std::vector<std::uint32_t>& labels,
                     std::vector<double>& best,
                     std::vector<std::size_t>& sizes) {
  const std::size_t num_clusters = sizes.size();
  for (;;) {
    std::size_t target = kNone;
    for (std::size_t l = 0; l < num_clusters; ++l) {
      if (sizes[l] < min_size) {
        target = l;
        break;
      }
    }
    if (target == kNone) return;

    kernels::squared_distances(soa, 0, soa.n,
                               centroids.data() + target * soa.dim,
                               dist_buf.data());
    std::size_t move_idx = kNone;
    double move_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::uint32_t own = labels[i];
      if (own == target || sizes[own] <= min_size) continue;
      const double cost = dist_buf[i] - best[i];
      if (cost < move_cost) {
        move_cost = cost;
        move_idx = i;
      }
    }
    if (move_idx == kNone) throw std::logic_error("repair_min_size: no donor");
    --sizes[labels[move_idx]];
    labels[move_idx] = static_cast<std::uint32_t>(target);
    ++sizes[target];
    best[move_idx] = dist_buf[move_idx];
  }
}

std::vector<double> cluster_means(const double* pts, std::size_t dim,
                                  const std::vector<std::uint32_t>& labels,
                                  const std::vector<std::size_t>& sizes) {
  std::vector<double> means(sizes.size() * dim, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double* m = means.data() + labels[i] * dim;
    const double* p = pts + i * dim;
    for (std::size_t d = 0; d < dim; ++d) m[d] += p[d];
  }
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    double* m = means.data() + l * dim;
    for (std::size_t d = 0; d < dim; ++d) m[d] /= static_cast<double>(sizes[l]);
  }
  return means;
}

double assignment_sse(const double* pts, std::size_t dim,
                      const std::vector<std::uint32_t>& labels,
                      const std::vector<double>& centroids) {
  double sse = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sse += point_sqdist(pts + i * dim, centroids.data() + labels[i] * dim, dim);
  }
  return sse;
}

}  // namespace

KmeansResult constrained_kmeans(const double* row_major, std::size_t n,
                                std::size_t dim, std::size_t num_clusters,
                                std::size_t min_cluster_size, RngStream& rng) {
  if (n == 0 || dim == 0) {
    throw std::invalid_argument("constrained_kmeans: empty input");
  }
  if (num_clusters == 0) {
    throw std::invalid_argument("constrained_kmeans: need at least 1 cluster");
  }
  if (n < num_clusters || n < num_clusters * min_cluster_size) {
    throw std::invalid_argument(
        "constrained_kmeans: infeasible constraint, n < L * n_min");
  }
  for (std::size_t i = 0; i < n * dim; ++i) {
    if (!std::isfinite(row_major[i])) {
      throw std::invalid_argument("constrained_kmeans: non-finite input");
    }
  }

  const SoaPoints soa(row_major, n, dim);
  std::vector<double> centroids =
      kmeanspp_init(row_major, n, dim, num_clusters, rng);

  std::vector<std::uint32_t> labels(n, 0);
  std::vector<double> best(n), dist_buf(n);

  KmeansResult res;
  std::vector<std::uint32_t> accepted_labels;
  std::vector<double> accepted_centroids;

  for (std::size_t iter = 1; iter <= kMaxIterations; ++iter) {
    assign_nearest(soa, centroids, num_clusters, dist_buf, best, labels);
    std::vector<std::size_t> sizes = cluster_sizes(labels, num_clusters);
    repair_empty(row_major, dim, centroids, labels, best, sizes);
    repair_min_size(soa, centroids, min_cluster_size, dist_buf, labels, best,
                    sizes);

    if (!accepted_labels.empty() && labels == accepted_labels) break;

    std::vector<double> new_centroids =
        cluster_means(row_major, dim, labels, sizes);
    const double new_sse = assignment_sse(row_major, dim, labels, new_centroids);
    // The greedy repairs do not prove end-to-end descent, so a step that
    // fails to improve the objective is dropped rather than recorded.
    if (!res.sse_trace.empty() && new_sse > res.sse_trace.back()) break;

    accepted_labels = labels;
    accepted_centroids = new_centroids;
    centroids = std::move(new_centroids);
    res.sse_trace.push_back(new_sse);
    res.iterations = iter;
  }

  res.labels = std::move(accepted_labels);
  res.centroids = std::move(accepted_centroids);
  return res;
}

PartitionResult partition_prior(const SampleBatch& theta,
                                const SampleBatch& y_star,
                                std::size_t num_clusters,
                                std::size_t min_cluster_size, RngStream& rng) {
  if (theta.n != y_star.n) {
    throw std::invalid_argument(
        "partition_prior: theta and y_star must be row-aligned");
  }
  KmeansResult km = constrained_kmeans(y_star.data.data(), y_star.n, y_star.dim,
                                       num_clusters, min_cluster_size, rng);

  PartitionResult pr;
  pr.labels = std::move(km.labels);
  pr.groups.assign(num_clusters, {});
  pr.counts.assign(num_clusters, 0);
  for (std::size_t i = 0; i < pr.labels.size(); ++i) {
    pr.groups[pr.labels[i]].push_back(static_cast<std::uint32_t>(i));
    ++pr.counts[pr.labels[i]];
  }
  pr.weights.resize(num_clusters);
  for (std::size_t l = 0; l < num_clusters; ++l) {
    pr.weights[l] =
        static_cast<double>(pr.counts[l]) / static_cast<double>(theta.n);
  }
  return pr;
}

}  // namespace lbkld
