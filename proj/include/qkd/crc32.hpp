#pragma once

#include <cstddef>
#include <cstdint>

namespace qkd {

class BitVec;

// CRC-32, reflected polynomial 0xEDB88320, initial value 0xFFFFFFFF,
// final XOR 0xFFFFFFFF (the usual IEEE/zlib parameters).
std::uint32_t crc32(const std::uint8_t* data, std::size_t len);

// Pad checksum: CRC-32 over the bits packed MSB-first, zero-padded to a
// byte boundary. Empty input yields 0x00000000.
std::uint32_t checksum(const BitVec& bits);

} // namespace qkd
