#pragma once

#include <cmath>
#include <cstdint>

// Deterministic, portable RNG used by every stochastic path: splitmix64 for
// the integer stream, Box-Muller for normals. Streams for sub-tasks are split
// from the master seed by index so results do not depend on execution order.
namespace sidecat::rng {

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t index_in(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Independent child stream for sub-task `index` of a master seed.
inline Stream child(std::uint64_t seed, std::uint64_t index) {
    Stream s(seed ^ (0x5851f42d4c957f2dull * (index + 1)));
    s.next_u64();  // decorrelate nearby seeds
    return s;
}

}  // namespace sidecat::rng
