// Seeded random streams for reproducible Monte Carlo runs.
//
// One replication owns one RngStream, addressed by (base_seed, stream_index).
// The stream state is a xoshiro256++ generator whose four state words are
// derived from an avalanche mix (splitmix64) of base seed and stream index,
// so nearby indices give unrelated sequences. Determinism contract: the same
// (base_seed, stream_index) always yields the same draw sequence within this
// implementation; no cross-platform bit compatibility is promised.

#ifndef CHUNKSIM_RNG_HPP
#define CHUNKSIM_RNG_HPP

#include <cmath>
#include <cstdint>

#include "chunksim/errors.hpp"

namespace chunksim {

class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
      : base_seed_(base_seed), stream_index_(stream_index) {
    std::uint64_t x = base_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  // xoshiro256++ step.
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1]; never returns 0 so log() is always safe.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw InvalidParameter("exponential rate must be positive and finite");
    return -std::log(uniform_pos()) / rate;
  }

  // Standard normal via Box-Muller (one value per call, second discarded).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Number of failures before the first success, success probability p.
  long long geometric_failures(double p) {
    if (!(p > 0.0) || p > 1.0) throw InvalidParameter("geometric p in (0,1]");
    if (p == 1.0) return 0;
    const double g = std::log(uniform_pos()) / std::log1p(-p);
    return static_cast<long long>(g);
  }

  long long poisson(double mean);
  double gamma(double shape, double scale);
  long long binomial(long long n, double p);

  // Failures before the r-th success; exact for any r via gamma-Poisson
  // mixing when r is large.
  long long negative_binomial(double r, double p_success);

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_seed_;
  std::uint64_t stream_index_;
  std::uint64_t state_[4];
};

// Draw from Exp(rate). Validates the rate; used for every holding time.
inline double sample_exponential(double rate, RngStream& rng) {
  return rng.exponential(rate);
}

}  // namespace chunksim

#endif  // CHUNKSIM_RNG_HPP
