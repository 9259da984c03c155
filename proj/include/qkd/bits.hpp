#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qkd {

class Rng;

// Packed bit sequence, most-significant-bit-first within each byte: bit 0 is
// the top bit of byte 0. Padding bits past size() are kept zero so byte-wide
// kernels can run over whole buffers.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits); // all zero

    static BitVec from_string(std::string_view bits);   // "1010"
    static BitVec from_bytes(const std::uint8_t* data, std::size_t nbits);
    static BitVec from_hex(std::string_view hex);       // byte-granular
    static BitVec random(std::size_t nbits, Rng& rng);

    std::size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool value);
    void push_back(bool value);

    // Zero-padded to the byte boundary; this is also the pad-file layout.
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    std::string to_string() const;
    std::string to_hex() const;

    BitVec slice(std::size_t offset, std::size_t len) const;

    // Bitwise XOR of equal-length sequences; throws LengthMismatch.
    BitVec operator^(const BitVec& other) const;

    // Number of differing bits; throws LengthMismatch.
    std::size_t hamming_distance(const BitVec& other) const;

    std::size_t count_ones() const;

    bool operator==(const BitVec& other) const = default;

  private:
    std::vector<std::uint8_t> bytes_;
    std::size_t nbits_ = 0;
};

} // namespace qkd
