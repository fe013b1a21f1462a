// AVX2 variants.  This translation unit is the only one built with
// -mavx2; it must stay free of code that runs before the dispatcher has
// checked CPUID.  No FMA: mul+add keeps every lane bit-identical to the
// scalar kernels.

#if defined(__x86_64__)

#include <immintrin.h>

#include "lbkld/kernels.hpp"

namespace lbkld::kernels::detail {

void squared_distances_avx2(const double* const* cols, std::size_t dim,
                            std::size_t count, const double* query,
                            double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dim; ++d) {
      const __m256d x = _mm256_loadu_pd(cols[d] + i);
      const __m256d q = _mm256_set1_pd(query[d]);
      const __m256d diff = _mm256_sub_pd(x, q);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = cols[d][i] - query[d];
      acc += diff * diff;
    }
    out[i] = acc;
  }
}

void subtract_avx2(const double* a, const double* b, double* out,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void argmin_update_avx2(double* best, std::uint32_t* labels,
                        const double* cand, std::uint32_t label,
                        std::size_t n) {
  const __m128i vlabel = _mm_set1_epi32(static_cast<int>(label));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d b = _mm256_loadu_pd(best + i);
    const __m256d c = _mm256_loadu_pd(cand + i);
    const __m256d lt = _mm256_cmp_pd(c, b, _CMP_LT_OQ);
    _mm256_storeu_pd(best + i, _mm256_blendv_pd(b, c, lt));
    // Narrow the four 64-bit lane masks to 32-bit for the label blend.
    const __m128 lo = _mm_castsi128_ps(_mm256_castsi256_si128(_mm256_castpd_si256(lt)));
    const __m128 hi = _mm_castsi128_ps(_mm256_extracti128_si256(_mm256_castpd_si256(lt), 1));
    const __m128i mask32 = _mm_castps_si128(_mm_shuffle_ps(lo, hi, _MM_SHUFFLE(2, 0, 2, 0)));
    const __m128i old = _mm_loadu_si128(reinterpret_cast<const __m128i*>(labels + i));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(labels + i),
                     _mm_blendv_epi8(old, vlabel, mask32));
  }
  for (; i < n; ++i) {
    if (cand[i] < best[i]) {
      best[i] = cand[i];
      labels[i] = label;
    }
  }
}

}  // namespace lbkld::kernels::detail

#endif  // __x86_64__
