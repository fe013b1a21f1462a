#pragma once

#include <cstdint>
#include <vector>

#include "lbkld/batch.hpp"
#include "lbkld/rng.hpp"

namespace lbkld {

struct KmeansResult {
  std::vector<std::uint32_t> labels;  // in [0, L)
  std::vector<double> centroids;      // L x dim, row-major
  std::vector<double> sse_trace;      // within-cluster SSE after each iteration
  std::size_t iterations = 0;
};

// Lloyd iterations with a minimum-cluster-size constraint: assign every
// point to its nearest centroid, reseed empty centroids at the point
// farthest from its own centroid, then top up deficient clusters with the
// cheapest outside points (donor clusters are never drained below n_min).
// An iteration whose repaired assignment would raise the objective is
// rejected, so sse_trace is non-increasing.  Fully deterministic given
// the rng state; ties break toward lower indices.
KmeansResult constrained_kmeans(const double* row_major, std::size_t n,
                                std::size_t dim, std::size_t num_clusters,
                                std::size_t min_cluster_size, RngStream& rng);

struct PartitionResult {
  std::vector<std::uint32_t> labels;               // per joint draw, in [0, L)
  std::vector<std::vector<std::uint32_t>> groups;  // ascending index sets
  std::vector<std::size_t> counts;                 // group sizes, sum == n
  std::vector<double> weights;                     // counts / n
};

// Clusters the simulated outputs y_star and carries the labels over to the
// row-aligned prior draws, yielding the mixture-component index sets and
// weights used by the partitioned utility estimate.
PartitionResult partition_prior(const SampleBatch& theta,
                                const SampleBatch& y_star,
                                std::size_t num_clusters,
                                std::size_t min_cluster_size, RngStream& rng);

}  // namespace lbkld
