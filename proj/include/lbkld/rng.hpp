#pragma once

#include <cstdint>
#include <cmath>

namespace lbkld {

// Counter-based random stream (Philox 4x64, 10 rounds, the variant numpy
// ships).  A stream is identified by a 128-bit key; the 256-bit counter is
// the draw position, so any number of streams can be derived up front and
// consumed in any order without coordination.  fold(i) derives the i-th
// child stream; substream assignment by logical index (replication, design
// row, trial) is what keeps results independent of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key0_(seed), key1_(stream_id) {}

  // Derived stream for logical work unit `index`.  Children of distinct
  // (stream, index) pairs are independent for all practical purposes.
  RngStream fold(std::uint64_t index) const {
    return RngStream(key0_, mix64(mix64(key1_) ^ (index + 0x9E3779B97F4A7C15ULL)));
  }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      philox_block();
      have_ = 4;
    }
    return buf_[4 - have_--];
  }

  // Uniform on (0,1); both endpoints excluded so log(u) is always finite.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased enough for index selection (bias < 2^-64).
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller (two uniforms per draw, no caching, so
  // the stream position is a pure function of the draw count).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Poisson draw; inversion for small means, Hormann's transformed
  // rejection (PTRD) above 10.
  long poisson(double mean);

  std::uint64_t key0() const { return key0_; }
  std::uint64_t key1() const { return key1_; }

 private:
  static std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  void philox_block();

  std::uint64_t key0_ = 0;
  std::uint64_t key1_ = 0;
  std::uint64_t counter_ = 0;  // block index; c1..c3 of the 256-bit counter stay 0
  std::uint64_t buf_[4] = {0, 0, 0, 0};
  int have_ = 0;
};

}  // namespace lbkld
