#pragma once

#include <cstddef>
#include <span>

#include "lbkld/batch.hpp"
#include "lbkld/rng.hpp"

namespace lbkld {

struct EntropyEstimate {
  double value = 0.0;  // nats
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t dim = 0;
};

// Kozachenko-Leonenko differential-entropy estimate from samples:
//   H = psi(n) - psi(k) + log V_dim + (dim/n) * sum_i log rho_i
// with rho_i the Euclidean distance from sample i to its k-th nearest
// neighbor (self excluded) and V_dim the unit-ball volume.  rho_i is
// floored at 1e-12 times the widest coordinate range so duplicate points
// cannot drive the sum to -inf; discrete-valued data should additionally
// be jittered (see below).
//
// Neighbor search uses a kd-tree for dim <= 10 and a full scan above.
EntropyEstimate knn_entropy(const double* row_major, std::size_t n,
                            std::size_t dim, std::size_t k);
EntropyEstimate knn_entropy(const SampleBatch& samples, std::size_t k);

// Exact k-th nearest-neighbor Euclidean distance of samples[query_index],
// self excluded, ties broken toward the lower point index.
double knn_query(const double* row_major, std::size_t n, std::size_t dim,
                 std::size_t query_index, std::size_t k);

// Adds independent Uniform(-scale/2, scale/2) noise to every entry;
// scale = 0 reproduces the input exactly (and still consumes one draw per
// entry, which keeps stream positions independent of the scale).
void jitter(SampleBatch& samples, double scale, RngStream& rng);

// Per-coordinate scales; used for outputs whose coordinates live on
// different lattices (counts vs. continuous summaries).
void jitter_columns(SampleBatch& samples, std::span<const double> scales,
                    RngStream& rng);

// log volume of the dim-dimensional Euclidean unit ball.
double log_unit_ball_volume(std::size_t dim);

}  // namespace lbkld
