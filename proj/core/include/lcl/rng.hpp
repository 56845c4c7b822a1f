#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lcl {

// SplitMix64, used to expand a master seed into independent stream seeds.
// The expansion is pure arithmetic on u64, so (seed, label, index) -> stream
// is reproducible across platforms.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

std::uint64_t fnv1a64(std::string_view s);

// Deterministic per-purpose stream seed: master seed, a purpose label and a
// counter index are hashed together.  Every sampler in the project receives
// its stream through this function, never a shared generator.
std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index);

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0,1) with 53 random bits; avoids the
    // implementation-defined std::generate_canonical.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [a,b).
    double uniform(double a, double b) { return a + (b - a) * u01(); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace lcl
