#pragma once

#include <cstdint>

#include "sbo/grid.hpp"

namespace sbo {

// Deterministic generator used for every randomized sweep; identical seeds
// reproduce identical streams on any platform (no library distributions).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // xorshift64* keeps the implementation self-contained and stable
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    cplx unit_disk() {
        // rejection-free polar sample, phase uniform, radius sqrt-uniform
        const double r = std::sqrt(uniform());
        const double th = 2.0 * kPi * uniform();
        return cplx(r * std::cos(th), r * std::sin(th));
    }

    // stream derivation for parallel fan-out: child streams never collide
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

}  // namespace sbo
