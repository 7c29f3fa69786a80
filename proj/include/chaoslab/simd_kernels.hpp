// Byte-array kernels behind the NPCR/UACI metrics: count of differing
// positions and sum of absolute differences. Scalar reference plus SSE2/AVX2
// variants on x86-64, selected once at runtime from CPU capabilities (the
// CHAOSLAB_SIMD environment variable forces a specific variant). All variants
// are integer-exact, so every implementation must agree bit-for-bit; the test
// suite checks each compiled variant against the scalar reference.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace chaoslab::simd {

using CountDiffFn = std::uint64_t (*)(const std::uint8_t*, const std::uint8_t*,
                                      std::size_t);
using SumAbsDiffFn = std::uint64_t (*)(const std::uint8_t*, const std::uint8_t*,
                                       std::size_t);

struct KernelSet {
    const char* name;
    CountDiffFn count_diff;
    SumAbsDiffFn sum_absdiff;
};

// Scalar reference implementations.
std::uint64_t count_diff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                                   std::size_t n);
std::uint64_t sum_absdiff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                                    std::size_t n);

// The kernel set picked for this process (resolved once, thread-safe).
const KernelSet& active();

// Every variant compiled in and usable on this CPU, scalar first.
std::vector<KernelSet> available();

// Dispatched entry points used by the metrics module.
inline std::uint64_t count_diff_u8(const std::uint8_t* a, const std::uint8_t* b,
                                   std::size_t n) {
    return active().count_diff(a, b, n);
}

inline std::uint64_t sum_absdiff_u8(const std::uint8_t* a, const std::uint8_t* b,
                                    std::size_t n) {
    return active().sum_absdiff(a, b, n);
}

}  // namespace chaoslab::simd
