#pragma once

#include <cstdint>

namespace sphlab {

// Counter-based deterministic stream: every draw is a pure function of its
// key, so results do not depend on evaluation order or threading.

std::uint64_t mix64(std::uint64_t x);

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0);

/// Uniform on (0, 1].
double uniform_open(std::uint64_t key);

/// Standard normal via Box-Muller on two sub-keys of key.
double standard_normal(std::uint64_t key);

}  // namespace sphlab
