#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "lbkld/batch.hpp"

namespace lbkld {

// Median-split kd-tree for exact k-nearest-neighbor queries.  Points are
// reordered into a column-major block at build time so leaf scans run
// through the batch distance kernel.  Neighbor order is lexicographic in
// (distance, original index), which pins tie-breaking.
class KdTree {
 public:
  static constexpr std::size_t kNoExclude = std::numeric_limits<std::size_t>::max();

  KdTree(const double* row_major, std::size_t n, std::size_t dim,
         std::size_t bucket_size = 16);

  // Squared distance to the k-th nearest neighbor of `query`, optionally
  // excluding one original index (a query point is its own 0-distance
  // neighbor otherwise).
  double knn_sqdist(const double* query, std::size_t k,
                    std::size_t exclude_index = kNoExclude) const;

  std::size_t size() const { return pts_.n; }
  std::size_t dim() const { return pts_.dim; }

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t axis = 0;
    std::uint32_t left = 0;   // 0 marks a leaf; the root is never a child
    std::uint32_t right = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  struct Candidate {
    double d2;
    std::uint32_t index;
    bool operator<(const Candidate& o) const {
      return d2 < o.d2 || (d2 == o.d2 && index < o.index);
    }
  };

  // Bounded worst-first heap of the k best candidates seen so far.
  struct Heap {
    std::vector<Candidate> items;
    std::size_t cap;
    explicit Heap(std::size_t k) : cap(k) { items.reserve(k); }
    bool full() const { return items.size() == cap; }
    const Candidate& worst() const { return items.front(); }
    void offer(Candidate c);
  };

  std::uint32_t build(std::vector<std::uint32_t>& order, const double* row_major,
                      std::size_t dim, std::uint32_t begin, std::uint32_t end,
                      std::size_t bucket);
  void search(std::uint32_t node, const double* query, std::size_t exclude,
              Heap& heap, std::vector<double>& scratch) const;

  SoaPoints pts_;                    // reordered
  std::vector<std::uint32_t> index_; // reordered position -> original index
  std::vector<Node> nodes_;
};

}  // namespace lbkld
