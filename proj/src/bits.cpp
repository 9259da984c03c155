#include "qkd/bits.hpp"

#include "qkd/errors.hpp"
#include "qkd/kernels/bitops.hpp"
#include "qkd/rng.hpp"

namespace qkd {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

BitVec::BitVec(std::size_t nbits) : bytes_((nbits + 7) / 8, 0), nbits_(nbits) {}

BitVec BitVec::from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i, true);
        } else if (bits[i] != '0') {
            throw Error("BitVec::from_string: expected only '0'/'1'");
        }
    }
    return v;
}

BitVec BitVec::from_bytes(const std::uint8_t* data, std::size_t nbits) {
    BitVec v(nbits);
    const std::size_t nbytes = (nbits + 7) / 8;
    for (std::size_t i = 0; i < nbytes; ++i) {
        v.bytes_[i] = data[i];
    }
    // keep padding bits zero
    if (nbits % 8 != 0) {
        v.bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - nbits % 8));
    }
    return v;
}

BitVec BitVec::from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error("BitVec::from_hex: odd number of hex digits");
    }
    BitVec v(hex.size() * 4);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const int d = hex_value(hex[i]);
        if (d < 0) {
            throw Error("BitVec::from_hex: invalid hex digit");
        }
        if (i % 2 == 0) {
            v.bytes_[i / 2] = static_cast<std::uint8_t>(d << 4);
        } else {
            v.bytes_[i / 2] |= static_cast<std::uint8_t>(d);
        }
    }
    return v;
}

BitVec BitVec::random(std::size_t nbits, Rng& rng) {
    BitVec v(nbits);
    std::size_t i = 0;
    while (i < v.bytes_.size()) {
        std::uint64_t word = rng.next_u64();
        for (int k = 7; k >= 0 && i < v.bytes_.size(); --k, ++i) {
            v.bytes_[i] = static_cast<std::uint8_t>(word >> (8 * k));
        }
    }
    if (nbits % 8 != 0) {
        v.bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - nbits % 8));
    }
    return v;
}

bool BitVec::get(std::size_t i) const {
    if (i >= nbits_) {
        throw Error("BitVec::get: index out of range");
    }
    return (bytes_[i / 8] >> (7 - i % 8)) & 1;
}

void BitVec::set(std::size_t i, bool value) {
    if (i >= nbits_) {
        throw Error("BitVec::set: index out of range");
    }
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - i % 8));
    if (value) {
        bytes_[i / 8] |= mask;
    } else {
        bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
    }
}

void BitVec::push_back(bool value) {
    if (nbits_ % 8 == 0) {
        bytes_.push_back(0);
    }
    ++nbits_;
    set(nbits_ - 1, value);
}

std::string BitVec::to_string() const {
    std::string s;
    s.reserve(nbits_);
    for (std::size_t i = 0; i < nbits_; ++i) {
        s.push_back(get(i) ? '1' : '0');
    }
    return s;
}

std::string BitVec::to_hex() const {
    std::string s;
    s.reserve(bytes_.size() * 2);
    for (const std::uint8_t b : bytes_) {
        s.push_back(kHexDigits[b >> 4]);
        s.push_back(kHexDigits[b & 0x0F]);
    }
    return s;
}

BitVec BitVec::slice(std::size_t offset, std::size_t len) const {
    if (offset + len > nbits_) {
        throw Error("BitVec::slice: range out of bounds");
    }
    BitVec v(len);
    for (std::size_t i = 0; i < len; ++i) {
        v.set(i, get(offset + i));
    }
    return v;
}

BitVec BitVec::operator^(const BitVec& other) const {
    if (nbits_ != other.nbits_) {
        throw LengthMismatch("xor: operand lengths differ");
    }
    BitVec out(nbits_);
    if (!bytes_.empty()) {
        kernels::xor_bytes(out.bytes_.data(), bytes_.data(), other.bytes_.data(),
                           bytes_.size());
    }
    return out;
}

std::size_t BitVec::hamming_distance(const BitVec& other) const {
    if (nbits_ != other.nbits_) {
        throw LengthMismatch("hamming_distance: operand lengths differ");
    }
    if (bytes_.empty()) {
        return 0;
    }
    return static_cast<std::size_t>(
        kernels::hamming_bytes(bytes_.data(), other.bytes_.data(), bytes_.size()));
}

std::size_t BitVec::count_ones() const {
    if (bytes_.empty()) {
        return 0;
    }
    return static_cast<std::size_t>(
        kernels::popcount_bytes(bytes_.data(), bytes_.size()));
}

} // namespace qkd
