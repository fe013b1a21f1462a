#include "lbkld/batch.hpp"

namespace lbkld {

SoaPoints::SoaPoints(const double* row_major, std::size_t n_, std::size_t dim_)
    : n(n_), dim(dim_) {
  stride = (n + 3) & ~std::size_t{3};  // pad to a multiple of 4 lanes
  data.assign(stride * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d)
      data[d * stride + i] = row_major[i * dim_ + d];
}

}  // namespace lbkld
