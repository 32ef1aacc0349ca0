#pragma once

#include <cstdint>

#include "cx/common.hpp"

namespace cxr {

/// splitmix64 step; used both as a generator seeder and as the documented
/// per-shard seed derivation rule: shard_seed = splitmix64(seed ^ tag).
std::uint64_t splitmix64(std::uint64_t& state);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

/// xoshiro256++ with hand-rolled double conversion so that streams are
/// byte-reproducible across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (deterministic, caches the spare).
    double gaussian();

    C gaussian_complex();

    /// Uniform in the closed disk of given radius about the origin.
    C uniform_disk(double radius);

    /// Uniform in the square [lo,hi]^2 as a complex number.
    C uniform_square(double lo, double hi);

  private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cxr
