#pragma once

#include <cstdint>
#include <limits>

namespace rqcm {

/// (seed, stream_id) names one independent, reproducible random stream.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Counter-based generator: the k-th output is splitmix64(key + k * golden), with
/// the key derived from (seed, stream_id). Streams never share state, so Monte
/// Carlo workers can be scheduled in any order. Satisfies
/// UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(RngSeed seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on (0, 1].
  double uniform_open0();
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace rqcm
