#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lbkld {

// Candidate design: a short real vector.  Scalar designs have one
// coordinate, Ricker statistic pairs two (the indices as reals), aphid
// sampling-time designs k.
struct DesignPoint {
  std::vector<double> coords;

  DesignPoint() = default;
  explicit DesignPoint(std::vector<double> c) : coords(std::move(c)) {}
  DesignPoint(std::initializer_list<double> c) : coords(c) {}

  std::size_t size() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }

  friend bool operator==(const DesignPoint& a, const DesignPoint& b) {
    return a.coords == b.coords;
  }
  // Lexicographic; used for deterministic tie-breaking in sweeps.
  friend bool operator<(const DesignPoint& a, const DesignPoint& b) {
    return a.coords < b.coords;
  }
};

// n x dim row-major matrix of sample points plus provenance (which design
// and seed produced it).
struct SampleBatch {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> data;  // row-major, n*dim
  DesignPoint design;
  std::uint64_t seed = 0;

  SampleBatch() = default;
  SampleBatch(std::size_t n_, std::size_t dim_)
      : n(n_), dim(dim_), data(n_ * dim_, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * dim; }
  const double* row(std::size_t i) const { return data.data() + i * dim; }
  double& at(std::size_t i, std::size_t d) { return data[i * dim + d]; }
  double at(std::size_t i, std::size_t d) const { return data[i * dim + d]; }
};

// Column-major (structure-of-arrays) copy used by the distance kernels:
// coordinate d of point i lives at col(d)[i].  Columns share one padded
// stride so vector loads can run to the padded end without branching.
struct SoaPoints {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t stride = 0;
  std::vector<double> data;

  SoaPoints() = default;
  SoaPoints(const double* row_major, std::size_t n_, std::size_t dim_);
  explicit SoaPoints(const SampleBatch& b) : SoaPoints(b.data.data(), b.n, b.dim) {}

  double* col(std::size_t d) { return data.data() + d * stride; }
  const double* col(std::size_t d) const { return data.data() + d * stride; }
};

}  // namespace lbkld
