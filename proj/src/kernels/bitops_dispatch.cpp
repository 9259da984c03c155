#include "qkd/kernels/bitops.hpp"

#include "qkd/errors.hpp"

namespace qkd::kernels {

namespace {

Impl resolve_default() {
    return avx2_available() ? Impl::avx2 : Impl::scalar;
}

Impl& current() {
    static Impl impl = resolve_default();
    return impl;
}

} // namespace

bool avx2_available() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    return avx2_compiled() && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Impl active_impl() {
    return current();
}

void force_impl(Impl impl) {
    if (impl == Impl::avx2 && !avx2_available()) {
        throw Error("force_impl: AVX2 unavailable on this host");
    }
    current() = impl;
}

void xor_bytes(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
               std::size_t n) {
    if (current() == Impl::avx2) {
        xor_bytes_avx2(dst, a, b, n);
    } else {
        xor_bytes_scalar(dst, a, b, n);
    }
}

std::uint64_t hamming_bytes(const std::uint8_t* a, const std::uint8_t* b,
                            std::size_t n) {
    if (current() == Impl::avx2) {
        return hamming_bytes_avx2(a, b, n);
    }
    return hamming_bytes_scalar(a, b, n);
}

std::uint64_t popcount_bytes(const std::uint8_t* p, std::size_t n) {
    if (current() == Impl::avx2) {
        return popcount_bytes_avx2(p, n);
    }
    return popcount_bytes_scalar(p, n);
}

} // namespace qkd::kernels
