#pragma once

#include <cmath>
#include <cstdint>

namespace carnot {

// Counter-based 64-bit generator (splitmix-style output mix). Every stochastic
// routine in the library draws from one of these, seeded explicitly; child
// streams are derived by mixing a stream index into the seed so worker streams
// never overlap. Exact streams are not promised reproducible across languages,
// only across runs and thread counts of this library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : counter_(mix(seed ^ 0x7c15d8a7u)) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  Rng child(std::uint64_t stream) const {
    return Rng(mix(counter_ ^ mix(stream + 0x632be59bd9b4e019ull)));
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = counter_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Box-Muller with a cached spare
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  bool bernoulli() { return (next_u64() & 1ull) != 0; }

 private:
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace carnot
