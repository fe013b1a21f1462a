#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "lbkld/batch.hpp"

// Data-parallel inner loops behind the entropy estimator and the
// clustering step, in scalar and AVX2 variants selected at runtime.
//
// Every kernel produces one output per lane with a fixed per-lane
// operation order (accumulation runs over dim within a lane, never across
// lanes), so the scalar and vector variants are bit-identical, not merely
// close.  The equivalence tests assert exact equality.

namespace lbkld::kernels {

enum class Isa { scalar, avx2 };

// Active instruction set.  Picked once from CPUID; the LBKLD_SIMD
// environment variable ("scalar" or "avx2") overrides for testing.
Isa active_isa();
std::string isa_name(Isa isa);

// Forces a specific variant (tests only; not thread-safe against
// concurrent kernel use).
void force_isa(Isa isa);

// out[i] = sum_d (points.col(d)[i + offset] - query[d])^2 for i in [0, count).
void squared_distances(const SoaPoints& points, std::size_t offset,
                       std::size_t count, const double* query, double* out);

// out[i] = a[i] - b[i]
void subtract(const double* a, const double* b, double* out, std::size_t n);

// Running elementwise argmin: where cand[i] < best[i], set best[i] =
// cand[i] and label[i] = label.  Strict < keeps the lowest label on ties.
void argmin_update(double* best, std::uint32_t* labels, const double* cand,
                   std::uint32_t label, std::size_t n);

namespace detail {
void squared_distances_scalar(const double* const* cols, std::size_t dim,
                              std::size_t count, const double* query, double* out);
void subtract_scalar(const double* a, const double* b, double* out, std::size_t n);
void argmin_update_scalar(double* best, std::uint32_t* labels, const double* cand,
                          std::uint32_t label, std::size_t n);
#if defined(__x86_64__)
void squared_distances_avx2(const double* const* cols, std::size_t dim,
                            std::size_t count, const double* query, double* out);
void subtract_avx2(const double* a, const double* b, double* out, std::size_t n);
void argmin_update_avx2(double* best, std::uint32_t* labels, const double* cand,
                        std::uint32_t label, std::size_t n);
#endif
}  // namespace detail

}  // namespace lbkld::kernels
