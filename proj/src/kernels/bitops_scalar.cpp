#include "qkd/kernels/bitops.hpp"

#include <bit>

namespace qkd::kernels {

void xor_bytes_scalar(std::uint8_t* dst, const std::uint8_t* a,
                      const std::uint8_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = static_cast<std::uint8_t>(a[i] ^ b[i]);
    }
}

std::uint64_t hamming_bytes_scalar(const std::uint8_t* a,
                                   const std::uint8_t* b, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
    }
    return total;
}

std::uint64_t popcount_bytes_scalar(const std::uint8_t* p, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += std::popcount(static_cast<unsigned>(p[i]));
    }
    return total;
}

} // namespace qkd::kernels
