#include "lcl/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "lcl/version.hpp"

namespace lcl {

namespace {

constexpr char kMagic[4] = {'L', 'C', 'L', '1'};

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IoFailure("truncated checkpoint file");
    return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const VelocityField& u) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoFailure("cannot open checkpoint for writing: " + path);
    const GridSpec& g = u.grid();

    std::uint32_t count = 0;
    for_each_canonical(g.cutoff(), [&](int, int) { ++count; });

    os.write(kMagic, 4);
    put<std::uint32_t>(os, kFormatVersion);
    put<std::uint32_t>(os, std::uint32_t(g.N));
    put<double>(os, g.nu);
    put<std::uint32_t>(os, count);
    for_each_canonical(g.cutoff(), [&](int k1, int k2) {
        auto c = u.coeff(k1, k2);
        put<std::int32_t>(os, k1);
        put<std::int32_t>(os, k2);
        put<double>(os, c[0].real());
        put<double>(os, c[0].imag());
        put<double>(os, c[1].real());
        put<double>(os, c[1].imag());
    });
    if (!os) throw IoFailure("failed writing checkpoint: " + path);
}

VelocityField read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IoFailure("not a checkpoint file: " + path);
    auto version = get<std::uint32_t>(is);
    if (version != kFormatVersion)
        throw VersionMismatch("checkpoint format version mismatch");
    GridSpec g;
    g.N = int(get<std::uint32_t>(is));
    g.nu = get<double>(is);
    auto count = get<std::uint32_t>(is);
    VelocityField u(g);
    for (std::uint32_t i = 0; i < count; ++i) {
        int k1 = get<std::int32_t>(is);
        int k2 = get<std::int32_t>(is);
        double re1 = get<double>(is), im1 = get<double>(is);
        double re2 = get<double>(is), im2 = get<double>(is);
        u.add_mode_pair(k1, k2, Complex(re1, im1), Complex(re2, im2));
    }
    return u;
}

}  // namespace lcl
