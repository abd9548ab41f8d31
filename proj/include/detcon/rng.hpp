#ifndef DETCON_RNG_HPP
#define DETCON_RNG_HPP

#include <cstdint>

namespace detcon {

// Counter-based generator in SplitMix64 counter mode.
//
// Draw k (1-based) of stream s under a seed is
//   mix64(subseed + k * GAMMA),  subseed = mix64(seed + (s + 1) * GAMMA),
// where mix64 is the SplitMix64 finalizer and GAMMA = 0x9E3779B97F4A7C15.
// The generator is stateless apart from the counter, so any draw can be
// reproduced from (seed, stream, counter) on any platform, and per-agent
// streams make results independent of agent iteration order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

  std::uint64_t next_u64();

  // uniform on [0, 1), 53 random bits
  double uniform();

  // standard normal via Box-Muller; consumes two uniforms
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t subseed_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace detcon

#endif
