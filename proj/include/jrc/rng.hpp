#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace jrc {

// 64-bit mixer (splitmix64 finalizer). Used to derive independent substream
// seeds from (base seed, domain tag, indices) so every trial/beam/slot gets
// its own reproducible stream regardless of evaluation order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_of(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}
inline std::uint64_t seed_of(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return seed_of(seed_of(a, b), c);
}
inline std::uint64_t seed_of(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                             std::uint64_t d) {
  return seed_of(seed_of(a, b, c), d);
}

// Substream domain tags. Keyed so radar draws depend on (trial, beam) and
// channel draws on (trial, slot); algorithms sharing a trial therefore see
// identical radar cubes and fading sequences (common random numbers).
enum : std::uint64_t {
  kDomainTrial = 0x7261646172ULL,
  kDomainRadarBeam = 0x6265616dULL,
  kDomainFading = 0x66616465ULL,
  kDomainPick = 0x7069636bULL,
  kDomainNoiseCal = 0x63616cULL,
};

// Random stream with portable draw formulas. mt19937_64 output is pinned by
// the standard; the distributions here avoid std::*_distribution because
// their algorithms are implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(mix64(seed)) {}

  double uniform() {  // (0, 1]
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Unit-mean exponential (Rayleigh fading power).
  double exponential() { return -std::log(uniform()); }

  std::uint64_t integer(std::uint64_t bound) {  // [0, bound)
    return gen_() % bound;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// One-shot draws for per-slot quantities: a full generator per slot would be
// wasteful, and the mixed counter is already uniform.
inline double unit_uniform_at(std::uint64_t seed) {
  return (static_cast<double>(mix64(seed) >> 11) + 1.0) * 0x1.0p-53;
}
inline double exponential_at(std::uint64_t seed) {
  return -std::log(unit_uniform_at(seed));
}

}  // namespace jrc
