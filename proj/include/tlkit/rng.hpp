#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace tlkit {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based generator. Output i is mix64(key + (i+1) * golden), so a stream
// is fully determined by (seed, name) and two names never share a key schedule.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next();
  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1)
  double normal();        // Box-Muller, pairs cached
  int sign();             // fair +-1
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound), bound > 0

  Rng derive(std::string_view name) const;
  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return ctr_; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Hash of a point's bit pattern, used to key per-point random labels.
std::uint64_t hash_point(std::span<const double> x, std::uint64_t seed);

}  // namespace tlkit
