// Size-constrained clustering: constraint enforcement, determinism, and
// objective monotonicity.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "lbkld/partition.hpp"
#include "lbkld/rng.hpp"

using lbkld::constrained_kmeans;
using lbkld::KmeansResult;
using lbkld::partition_prior;
using lbkld::RngStream;
using lbkld::SampleBatch;

namespace {

std::vector<std::size_t> sizes(const KmeansResult& res, std::size_t L) {
  std::vector<std::size_t> s(L, 0);
  for (std::uint32_t lab : res.labels) {
    REQUIRE(lab < L);
    ++s[lab];
  }
  return s;
}

// Two Gaussian blobs at (0,0) and (10,10).
std::vector<double> two_blobs(std::size_t n_a, std::size_t n_b,
                              std::uint64_t seed) {
  std::vector<double> rows;
  RngStream rng(seed);
  for (std::size_t i = 0; i < n_a + n_b; ++i) {
    double cx = i < n_a ? 0.0 : 10.0;
    rows.push_back(cx + 0.5 * rng.normal());
    rows.push_back(cx + 0.5 * rng.normal());
  }
  return rows;
}

}  // namespace

TEST_CASE("single cluster takes every point") {
  std::vector<double> rows = two_blobs(20, 20, 1);
  RngStream rng(2);
  KmeansResult res = constrained_kmeans(rows.data(), 40, 2, 1, 1, rng);
  CHECK(sizes(res, 1)[0] == 40);

  // Centroid is the plain mean.
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    mx += rows[2 * i];
    my += rows[2 * i + 1];
  }
  CHECK(res.centroids[0] == doctest::Approx(mx / 40).epsilon(1e-12));
  CHECK(res.centroids[1] == doctest::Approx(my / 40).epsilon(1e-12));
}

TEST_CASE("two separated blobs are recovered exactly") {
  std::vector<double> rows = two_blobs(60, 40, 5);
  RngStream rng(6);
  KmeansResult res = constrained_kmeans(rows.data(), 100, 2, 2, 10, rng);
  std::vector<std::size_t> s = sizes(res, 2);
  std::sort(s.begin(), s.end());
  CHECK(s[0] == 40);
  CHECK(s[1] == 60);
  // Every point in a blob carries the same label.
  for (std::size_t i = 1; i < 60; ++i) CHECK(res.labels[i] == res.labels[0]);
  for (std::size_t i = 61; i < 100; ++i) CHECK(res.labels[i] == res.labels[60]);
  CHECK(res.labels[0] != res.labels[60]);
}

TEST_CASE("tight constraint forces equal split") {
  // 30 points, 3 clusters, minimum 10: the only feasible sizes are 10/10/10
  // whatever the geometry.
  std::vector<double> rows = two_blobs(25, 5, 9);
  RngStream rng(10);
  KmeansResult res = constrained_kmeans(rows.data(), 30, 2, 3, 10, rng);
  std::vector<std::size_t> s = sizes(res, 3);
  CHECK(s[0] == 10);
  CHECK(s[1] == 10);
  CHECK(s[2] == 10);
}

TEST_CASE("identical seed gives identical labels") {
  std::vector<double> rows = two_blobs(50, 50, 12);
  RngStream a(33), b(33);
  KmeansResult ra = constrained_kmeans(rows.data(), 100, 2, 4, 5, a);
  KmeansResult rb = constrained_kmeans(rows.data(), 100, 2, 4, 5, b);
  CHECK(ra.labels == rb.labels);
  CHECK(ra.centroids == rb.centroids);
  CHECK(ra.sse_trace == rb.sse_trace);
}

TEST_CASE("objective is non-increasing across iterations") {
  std::vector<double> rows = two_blobs(80, 120, 14);
  RngStream rng(15);
  KmeansResult res = constrained_kmeans(rows.data(), 200, 2, 5, 8, rng);
  REQUIRE(!res.sse_trace.empty());
  for (std::size_t i = 1; i < res.sse_trace.size(); ++i) {
    CHECK(res.sse_trace[i] <= res.sse_trace[i - 1]);
  }
  CHECK(res.iterations == res.sse_trace.size());
}

TEST_CASE("coincident points still satisfy the constraint") {
  // Every point identical: assignment is all ties, so the empty-cluster
  // repair has to populate the second cluster.
  std::vector<double> rows(20, 3.25);
  RngStream rng(8);
  KmeansResult res = constrained_kmeans(rows.data(), 10, 2, 2, 1, rng);
  std::vector<std::size_t> s = sizes(res, 2);
  CHECK(s[0] >= 1);
  CHECK(s[1] >= 1);
  CHECK(s[0] + s[1] == 10);
}

TEST_CASE("infeasible or degenerate inputs throw") {
  std::vector<double> rows = two_blobs(10, 10, 2);
  RngStream rng(1);
  // n < L * n_min
  CHECK_THROWS_AS(constrained_kmeans(rows.data(), 20, 2, 3, 8, rng),
                  std::invalid_argument);
  // n < L
  CHECK_THROWS_AS(constrained_kmeans(rows.data(), 2, 2, 3, 1, rng),
                  std::invalid_argument);
  // no clusters requested
  CHECK_THROWS_AS(constrained_kmeans(rows.data(), 20, 2, 0, 1, rng),
                  std::invalid_argument);
  // empty input
  CHECK_THROWS_AS(constrained_kmeans(rows.data(), 0, 2, 1, 1, rng),
                  std::invalid_argument);
}

TEST_CASE("randomized instances keep every cluster at n_min") {
  RngStream meta(777);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t L = 1 + meta.uniform_index(5);
    std::size_t n_min = 1 + meta.uniform_index(8);
    std::size_t n = L * n_min + meta.uniform_index(150);
    std::size_t dim = 1 + meta.uniform_index(3);
    std::vector<double> rows(n * dim);
    for (double& v : rows) v = meta.uniform(-5.0, 5.0);

    RngStream rng(1000 + trial);
    KmeansResult res =
        constrained_kmeans(rows.data(), n, dim, L, n_min, rng);
    std::vector<std::size_t> s = sizes(res, L);
    for (std::size_t c = 0; c < L; ++c) CHECK(s[c] >= n_min);
    for (std::size_t i = 1; i < res.sse_trace.size(); ++i) {
      CHECK(res.sse_trace[i] <= res.sse_trace[i - 1]);
    }
  }
}

TEST_CASE("partition_prior groups index every row exactly once") {
  const std::size_t n = 120;
  SampleBatch theta(n, 1), y(n, 2);
  RngStream fill(3);
  for (std::size_t i = 0; i < n; ++i) {
    theta.at(i, 0) = fill.uniform();
    y.at(i, 0) = fill.normal();
    y.at(i, 1) = fill.normal();
  }
  RngStream rng(4);
  lbkld::PartitionResult part = partition_prior(theta, y, 4, 10, rng);

  REQUIRE(part.groups.size() == 4);
  REQUIRE(part.counts.size() == 4);
  REQUIRE(part.weights.size() == 4);
  std::set<std::uint32_t> seen;
  double weight_sum = 0.0;
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(part.counts[l] == part.groups[l].size());
    CHECK(part.counts[l] >= 10);
    CHECK(part.weights[l] ==
          static_cast<double>(part.counts[l]) / static_cast<double>(n));
    weight_sum += part.weights[l];
    CHECK(std::is_sorted(part.groups[l].begin(), part.groups[l].end()));
    for (std::uint32_t idx : part.groups[l]) {
      CHECK(part.labels[idx] == l);
      seen.insert(idx);
    }
  }
  CHECK(seen.size() == n);
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partition_prior rejects mismatched batches") {
  SampleBatch theta(10, 1), y(12, 1);
  RngStream rng(1);
  CHECK_THROWS_AS(partition_prior(theta, y, 2, 1, rng), std::invalid_argument);
}
