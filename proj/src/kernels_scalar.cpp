#include "lbkld/kernels.hpp"

namespace lbkld::kernels::detail {

void squared_distances_scalar(const double* const* cols, std::size_t dim,
                              std::size_t count, const double* query,
                              double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = cols[d][i] - query[d];
      acc += diff * diff;
    }
    out[i] = acc;
  }
}

void subtract_scalar(const double* a, const double* b, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void argmin_update_scalar(double* best, std::uint32_t* labels,
                          const double* cand, std::uint32_t label,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (cand[i] < best[i]) {
      best[i] = cand[i];
      labels[i] = label;
    }
  }
}

}  // namespace lbkld::kernels::detail
