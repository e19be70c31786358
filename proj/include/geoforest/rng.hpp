#pragma once

#include <cstdint>
#include <limits>

namespace geoforest {

/// SplitMix64: a 64-bit counter-based generator. Every random quantity in the
/// library is drawn from a stream keyed by (seed, domain, index) so results do
/// not depend on how work is scheduled across threads.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Stream domains. The numeric values are part of the reproducibility
/// contract; do not renumber.
enum class StreamDomain : std::uint64_t {
  mixture_class = 1,   // per-class mean and covariance factor
  mixture_weights = 2, // class probabilities
  mixture_sample = 3,  // per-sample class draw and tangent noise
  bootstrap = 4,       // per-tree resample in a forest
  tree = 5,            // per-tree feature subsampling
  cv_shuffle = 6,      // per-seed fold assignment
  sweep_trial = 7,     // per-trial dataset seed in scaling sweeps
};

inline SplitMix64 make_stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
  std::uint64_t h = SplitMix64::mix(seed ^ 0x6a09e667f3bcc909ULL);
  h = SplitMix64::mix(h ^ (static_cast<std::uint64_t>(domain) * 0xbb67ae8584caa73bULL));
  h = SplitMix64::mix(h + index * 0x3c6ef372fe94f82bULL);
  return SplitMix64(h);
}

/// Stream seed used to derive a child configuration seed (e.g. tree i of a forest).
inline std::uint64_t derive_seed(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
  auto g = make_stream(seed, domain, index);
  return g();
}

}  // namespace geoforest
