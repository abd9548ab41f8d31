#include "detcon/rng.hpp"

#include <cmath>

namespace detcon {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : subseed_(mix64(seed + (stream + 1) * kGamma)) {}

std::uint64_t CounterRng::at(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  const std::uint64_t subseed = mix64(seed + (stream + 1) * kGamma);
  return mix64(subseed + counter * kGamma);
}

std::uint64_t CounterRng::next_u64() { return mix64(subseed_ + (++counter_) * kGamma); }

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;  // keep log() finite
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace detcon
