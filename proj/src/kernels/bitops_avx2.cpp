// AVX2 variants of the byte kernels. This translation unit is the only one
// built with -mavx2; callers must check avx2_available() first.

#include "qkd/kernels/bitops.hpp"

#include "qkd/errors.hpp"

#if defined(QKD_KERNELS_AVX2_BUILD)

#include <bit>
#include <cstring>
#include <immintrin.h>

namespace qkd::kernels {

bool avx2_compiled() {
    return true;
}

void xor_bytes_avx2(std::uint8_t* dst, const std::uint8_t* a,
                    const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(va, vb));
    }
    xor_bytes_scalar(dst + i, a + i, b + i, n - i);
}

namespace {

inline std::uint64_t popcount_256(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return std::popcount(lanes[0]) + std::popcount(lanes[1]) +
           std::popcount(lanes[2]) + std::popcount(lanes[3]);
}

} // namespace

std::uint64_t hamming_bytes_avx2(const std::uint8_t* a, const std::uint8_t* b,
                                 std::size_t n) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        total += popcount_256(_mm256_xor_si256(va, vb));
    }
    return total + hamming_bytes_scalar(a + i, b + i, n - i);
}

std::uint64_t popcount_bytes_avx2(const std::uint8_t* p, std::size_t n) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        total += popcount_256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i)));
    }
    return total + popcount_bytes_scalar(p + i, n - i);
}

} // namespace qkd::kernels

#else // !QKD_KERNELS_AVX2_BUILD

namespace qkd::kernels {

bool avx2_compiled() {
    return false;
}

void xor_bytes_avx2(std::uint8_t*, const std::uint8_t*, const std::uint8_t*,
                    std::size_t) {
    throw Error("AVX2 kernels not built on this platform");
}

std::uint64_t hamming_bytes_avx2(const std::uint8_t*, const std::uint8_t*,
                                 std::size_t) {
    throw Error("AVX2 kernels not built on this platform");
}

std::uint64_t popcount_bytes_avx2(const std::uint8_t*, std::size_t) {
    throw Error("AVX2 kernels not built on this platform");
}

} // namespace qkd::kernels

#endif
