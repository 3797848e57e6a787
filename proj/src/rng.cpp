#include "tlkit/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlkit {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

Rng::Rng(std::uint64_t seed, std::string_view stream)
    : key_(mix64(seed ^ mix64(fnv1a(stream)))) {}

std::uint64_t Rng::next() {
  ++ctr_;
  return mix64(key_ + ctr_ * kGolden);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

int Rng::sign() { return (next() >> 63) ? 1 : -1; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next();
    if (r >= limit) return r % bound;
  }
}

Rng Rng::derive(std::string_view name) const {
  Rng r(0, name);
  r.key_ = mix64(key_ ^ mix64(fnv1a(name)));
  return r;
}

std::uint64_t hash_point(std::span<const double> x, std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ 0x5bd1e9955bd1e995ULL);
  for (double v : x) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
  return h;
}

}  // namespace tlkit
