#include "sphlab/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace sphlab {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (c + 0x2545f4914f6cdd1dULL));
  return h;
}

double uniform_open(std::uint64_t key) {
  return (static_cast<double>(mix64(key) >> 11) + 1.0) * 0x1.0p-53;
}

double standard_normal(std::uint64_t key) {
  const double u1 = uniform_open(key ^ 0x5555555555555555ULL);
  const double u2 = uniform_open(key ^ 0xaaaaaaaaaaaaaaaaULL);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sphlab
