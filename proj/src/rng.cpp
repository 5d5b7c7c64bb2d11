#include "rqcm/rng.hpp"

#include <cmath>
#include <numbers>

namespace rqcm {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(RngSeed seed)
    : key_(splitmix64_mix(seed.seed ^ splitmix64_mix(seed.stream_id + kGolden))) {}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double RngStream::uniform_open0() {
  // 53 random mantissa bits mapped onto (0, 1].
  return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open0();
  const double u2 = uniform_open0();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

}  // namespace rqcm
