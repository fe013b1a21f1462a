#include "lbkld/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace lbkld::kernels {

namespace {

Isa detect_isa() {
#if defined(__x86_64__)
  if (const char* env = std::getenv("LBKLD_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0) return Isa::avx2;
    throw std::runtime_error("LBKLD_SIMD must be 'scalar' or 'avx2'");
  }
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa> g_isa{detect_isa()};

constexpr std::size_t kMaxDim = 64;

}  // namespace

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
#if !defined(__x86_64__)
  if (isa == Isa::avx2) throw std::runtime_error("avx2 kernels not built on this target");
#endif
  g_isa.store(isa, std::memory_order_relaxed);
}

std::string isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

void squared_distances(const SoaPoints& points, std::size_t offset,
                       std::size_t count, const double* query, double* out) {
  if (points.dim > kMaxDim) throw std::invalid_argument("squared_distances: dim too large");
  const double* cols[kMaxDim];
  for (std::size_t d = 0; d < points.dim; ++d) cols[d] = points.col(d) + offset;
#if defined(__x86_64__)
  if (active_isa() == Isa::avx2) {
    detail::squared_distances_avx2(cols, points.dim, count, query, out);
    return;
  }
#endif
  detail::squared_distances_scalar(cols, points.dim, count, query, out);
}

void subtract(const double* a, const double* b, double* out, std::size_t n) {
#if defined(__x86_64__)
  if (active_isa() == Isa::avx2) {
    detail::subtract_avx2(a, b, out, n);
    return;
  }
#endif
  detail::subtract_scalar(a, b, out, n);
}

void argmin_update(double* best, std::uint32_t* labels, const double* cand,
                   std::uint32_t label, std::size_t n) {
#if defined(__x86_64__)
  if (active_isa() == Isa::avx2) {
    detail::argmin_update_avx2(best, labels, cand, label, n);
    return;
  }
#endif
  detail::argmin_update_scalar(best, labels, cand, label, n);
}

}  // namespace lbkld::kernels
