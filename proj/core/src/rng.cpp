#include "lcl/rng.hpp"

namespace lcl {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index) {
    SplitMix64 mix(master ^ fnv1a64(label));
    std::uint64_t s = mix.next();
    SplitMix64 mix2(s + 0x632be59bd9b4e019ULL * (index + 1));
    return mix2.next();
}

}  // namespace lcl
