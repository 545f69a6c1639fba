#ifndef MTAR_RNG_HPP
#define MTAR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace mtar {

// Mersenne-Twister stream with labeled substream derivation. All sampling in
// the library goes through this class so that a (seed, call sequence) pair
// reproduces bit-identical output independently of the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() {
    double u;
    do {
      u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
  }

  // Standard normal via Marsaglia polar, one spare cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::uint64_t seed() const { return seed_; }

  // Derives an independent stream from the original seed, a label, and an
  // index. Label collisions aside, substreams of the same parent never share
  // state (estimation vs forecasting vs per-replication streams).
  Rng substream(std::string_view label, std::uint64_t index = 0) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char ch : label) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(ch));
      h *= 0x100000001b3ULL;
    }
    h ^= index + 0x9e3779b97f4a7c15ULL;
    return Rng(mix(seed_ ^ mix(h)));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mtar

#endif  // MTAR_RNG_HPP
