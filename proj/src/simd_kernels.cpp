// Kernel variants and runtime dispatch. The SSE2/AVX2 paths use the target
// function attribute so the whole file builds with the default architecture
// flags; only the guarded functions emit vector instructions.

#include "chaoslab/simd_kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#define CHAOSLAB_X86 1
#include <immintrin.h>
#else
#define CHAOSLAB_X86 0
#endif

namespace chaoslab::simd {

std::uint64_t count_diff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                                   std::size_t n) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += a[i] != b[i];
    return count;
}

std::uint64_t sum_absdiff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                                    std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += static_cast<std::uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
    return sum;
}

#if CHAOSLAB_X86

namespace {

__attribute__((target("sse2"))) std::uint64_t count_diff_u8_sse2(
    const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::uint64_t count = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
        const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
        const int eq_mask = _mm_movemask_epi8(_mm_cmpeq_epi8(va, vb));
        count += 16 - __builtin_popcount(static_cast<unsigned>(eq_mask));
    }
    for (; i < n; ++i) count += a[i] != b[i];
    return count;
}

__attribute__((target("sse2"))) std::uint64_t sum_absdiff_u8_sse2(
    const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    __m128i acc = _mm_setzero_si128();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
        const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
        acc = _mm_add_epi64(acc, _mm_sad_epu8(va, vb));
    }
    std::uint64_t lanes[2];
    _mm_storeu_si128(reinterpret_cast<__m128i*>(lanes), acc);
    std::uint64_t sum = lanes[0] + lanes[1];
    for (; i < n; ++i)
        sum += static_cast<std::uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
    return sum;
}

__attribute__((target("avx2"))) std::uint64_t count_diff_u8_avx2(
    const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::uint64_t count = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const unsigned eq_mask =
            static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
        count += 32 - __builtin_popcount(eq_mask);
    }
    for (; i < n; ++i) count += a[i] != b[i];
    return count;
}

__attribute__((target("avx2"))) std::uint64_t sum_absdiff_u8_avx2(
    const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, vb));
    }
    std::uint64_t lanes[4];
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i)
        sum += static_cast<std::uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
    return sum;
}

}  // namespace

#endif  // CHAOSLAB_X86

namespace {

const KernelSet kScalar{"scalar", count_diff_u8_scalar, sum_absdiff_u8_scalar};

std::vector<KernelSet> build_available() {
    std::vector<KernelSet> sets{kScalar};
#if CHAOSLAB_X86
    if (__builtin_cpu_supports("sse2"))
        sets.push_back(KernelSet{"sse2", count_diff_u8_sse2, sum_absdiff_u8_sse2});
    if (__builtin_cpu_supports("avx2"))
        sets.push_back(KernelSet{"avx2", count_diff_u8_avx2, sum_absdiff_u8_avx2});
#endif
    return sets;
}

KernelSet pick_active() {
    const std::vector<KernelSet> sets = build_available();
    if (const char* forced = std::getenv("CHAOSLAB_SIMD")) {
        for (const KernelSet& k : sets)
            if (std::strcmp(k.name, forced) == 0) return k;
        // Unknown or unsupported name: fall through to the best available.
    }
    return sets.back();
}

}  // namespace

const KernelSet& active() {
    static const KernelSet chosen = pick_active();
    return chosen;
}

std::vector<KernelSet> available() { return build_available(); }

}  // namespace chaoslab::simd
