#pragma once

#include <cstddef>
#include <cstdint>

// Byte-buffer kernels behind BitVec. Scalar versions are the reference;
// the AVX2 variants are selected at runtime when the CPU supports them and
// are equivalence-tested against the scalar ones on random buffers.
namespace qkd::kernels {

enum class Impl { scalar, avx2 };

// --- dispatched entry points -------------------------------------------

void xor_bytes(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
               std::size_t n);
std::uint64_t hamming_bytes(const std::uint8_t* a, const std::uint8_t* b,
                            std::size_t n);
std::uint64_t popcount_bytes(const std::uint8_t* p, std::size_t n);

Impl active_impl();
// Test hook; throws qkd::Error when the requested variant cannot run here.
void force_impl(Impl impl);

bool avx2_compiled();  // variant built into this binary
bool avx2_available(); // built and supported by this CPU

// --- scalar reference kernels ------------------------------------------

void xor_bytes_scalar(std::uint8_t* dst, const std::uint8_t* a,
                      const std::uint8_t* b, std::size_t n);
std::uint64_t hamming_bytes_scalar(const std::uint8_t* a,
                                   const std::uint8_t* b, std::size_t n);
std::uint64_t popcount_bytes_scalar(const std::uint8_t* p, std::size_t n);

// --- AVX2 variants (throw when !avx2_compiled()) ------------------------

void xor_bytes_avx2(std::uint8_t* dst, const std::uint8_t* a,
                    const std::uint8_t* b, std::size_t n);
std::uint64_t hamming_bytes_avx2(const std::uint8_t* a, const std::uint8_t* b,
                                 std::size_t n);
std::uint64_t popcount_bytes_avx2(const std::uint8_t* p, std::size_t n);

} // namespace qkd::kernels
