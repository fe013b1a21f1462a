#include "lbkld/kdtree.hpp"

#include <algorithm>
#include <stdexcept>

#include "lbkld/kernels.hpp"

namespace lbkld {

void KdTree::Heap::offer(Candidate c) {
  auto less = [](const Candidate& a, const Candidate& b) { return a < b; };
  if (!full()) {
    items.push_back(c);
    std::push_heap(items.begin(), items.end(), less);
    return;
  }
  if (c < items.front()) {
    std::pop_heap(items.begin(), items.end(), less);
    items.back() = c;
    std::push_heap(items.begin(), items.end(), less);
  }
}

KdTree::KdTree(const double* row_major, std::size_t n, std::size_t dim,
               std::size_t bucket_size) {
  if (n == 0 || dim == 0) throw std::invalid_argument("KdTree: empty input");
  if (bucket_size == 0) bucket_size = 1;
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  nodes_.reserve(2 * (n / bucket_size + 2));
  build(order, row_major, dim, 0, static_cast<std::uint32_t>(n), bucket_size);

  index_ = std::move(order);
  std::vector<double> reordered(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d)
      reordered[i * dim + d] = row_major[index_[i] * dim + d];
  pts_ = SoaPoints(reordered.data(), n, dim);
}

std::uint32_t KdTree::build(std::vector<std::uint32_t>& order,
                            const double* row_major, std::size_t dim,
                            std::uint32_t begin, std::uint32_t end,
                            std::size_t bucket) {
  const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= bucket) return id;

  // Split the widest extent at its median.
  std::size_t axis = 0;
  double best_width = -1.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double lo = row_major[order[begin] * dim + d];
    double hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      const double v = row_major[order[i] * dim + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_width) {
      best_width = hi - lo;
      axis = d;
    }
  }

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid,
                   order.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                     const double va = row_major[a * dim + axis];
                     const double vb = row_major[b * dim + axis];
                     return va < vb || (va == vb && a < b);
                   });

  nodes_[id].axis = static_cast<std::uint32_t>(axis);
  nodes_[id].split = row_major[order[mid] * dim + axis];
  const std::uint32_t left = build(order, row_major, dim, begin, mid, bucket);
  const std::uint32_t right = build(order, row_major, dim, mid, end, bucket);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(std::uint32_t node_id, const double* query,
                    std::size_t exclude, Heap& heap,
                    std::vector<double>& scratch) const {
  const Node& node = nodes_[node_id];
  if (node.left == 0) {  // leaf
    const std::size_t count = node.end - node.begin;
    scratch.resize(count);
    kernels::squared_distances(pts_, node.begin, count, query, scratch.data());
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t original = index_[node.begin + i];
      if (original == exclude) continue;
      heap.offer({scratch[i], original});
    }
    return;
  }
  const double delta = query[node.axis] - node.split;
  const std::uint32_t near = delta < 0.0 ? node.left : node.right;
  const std::uint32_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, exclude, heap, scratch);
  // The far side may still hold an equally distant, lower-index neighbor,
  // so prune only on strict inequality.
  if (!heap.full() || delta * delta <= heap.worst().d2) {
    search(far, query, exclude, heap, scratch);
  }
}

double KdTree::knn_sqdist(const double* query, std::size_t k,
                          std::size_t exclude_index) const {
  const std::size_t available = pts_.n - (exclude_index == kNoExclude ? 0 : 1);
  if (k == 0 || k > available)
    throw std::invalid_argument("KdTree::knn_sqdist: k out of range");
  Heap heap(k);
  std::vector<double> scratch;
  search(0, query, exclude_index, heap, scratch);
  return heap.worst().d2;
}

}  // namespace lbkld
