#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lcl {

// Minimal SHA-256 (FIPS 180-4), used for manifest content hashes.
class Sha256 {
  public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }
    std::string hex_digest();

    static std::string of_string(std::string_view s);
    static std::string of_file(const std::string& path);

  private:
    void process_block(const std::uint8_t* p);

    std::uint32_t h_[8];
    std::uint8_t buf_[64];
    std::size_t buf_len_ = 0;
    std::uint64_t total_ = 0;
};

}  // namespace lcl
