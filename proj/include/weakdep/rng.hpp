#pragma once

// Counter-based random number generation with deterministic substreams.
//
// Every stream is addressed by a 64-bit key; draws are a keyed bijective mix
// of an incrementing counter, so a stream's output depends only on its key and
// the number of draws taken, never on scheduling.  Substream keys are derived
// with derive_stream(key, child), which is how replicates, nested input
// processes and auxiliary Monte Carlo runs get independent streams from one
// master seed.

#include <cmath>
#include <cstdint>

namespace weakdep {

namespace detail {
// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t derive_stream(std::uint64_t key, std::uint64_t child) {
  return detail::mix64(key ^ detail::mix64(child + 0x632be59bd9b4e019ULL));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(detail::mix64(key)) {}
  CounterRng(std::uint64_t master, std::uint64_t stream) : CounterRng(derive_stream(master, stream)) {}

  std::uint64_t next_u64() { return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe under x -> pow(x, negative).
  double next_unit_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method, one spare cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Student t with `dof` degrees of freedom (Bailey's polar method).
  double next_student(double dof) {
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(dof * (std::pow(s, -2.0 / dof) - 1.0) / s);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace weakdep
