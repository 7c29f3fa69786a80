#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "chaoslab/simd_kernels.hpp"

using namespace chaoslab;

namespace {

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    return v;
}

}  // namespace

TEST_CASE("every compiled kernel variant matches the scalar reference") {
    std::mt19937_64 rng(99);
    const auto sets = simd::available();
    REQUIRE(!sets.empty());
    CHECK(std::string(sets.front().name) == "scalar");

    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{15},
                          std::size_t{16}, std::size_t{17}, std::size_t{31},
                          std::size_t{32}, std::size_t{33}, std::size_t{64},
                          std::size_t{1000}, std::size_t{65543}}) {
        const auto a = random_bytes(rng, n);
        auto b = random_bytes(rng, n);
        // sprinkle in equal runs so both count paths see matches
        for (std::size_t i = 0; i + 4 < n; i += 7) b[i] = a[i];

        const std::uint64_t want_count = simd::count_diff_u8_scalar(a.data(), b.data(), n);
        const std::uint64_t want_sum = simd::sum_absdiff_u8_scalar(a.data(), b.data(), n);
        for (const auto& k : sets) {
            INFO("kernel ", k.name, " n=", n);
            CHECK(k.count_diff(a.data(), b.data(), n) == want_count);
            CHECK(k.sum_absdiff(a.data(), b.data(), n) == want_sum);
        }
    }
}

TEST_CASE("kernel edge values") {
    const std::vector<std::uint8_t> zeros(100, 0);
    const std::vector<std::uint8_t> full(100, 255);
    for (const auto& k : simd::available()) {
        CHECK(k.count_diff(zeros.data(), zeros.data(), zeros.size()) == 0);
        CHECK(k.sum_absdiff(zeros.data(), zeros.data(), zeros.size()) == 0);
        CHECK(k.count_diff(zeros.data(), full.data(), 100) == 100);
        CHECK(k.sum_absdiff(zeros.data(), full.data(), 100) == 100ull * 255);
    }
}

TEST_CASE("runtime dispatch picks an available variant") {
    const auto& chosen = simd::active();
    bool found = false;
    for (const auto& k : simd::available())
        if (std::string(k.name) == chosen.name) found = true;
    CHECK(found);

    // dispatched entry points agree with the reference
    std::mt19937_64 rng(100);
    const auto a = random_bytes(rng, 4097);
    const auto b = random_bytes(rng, 4097);
    CHECK(simd::count_diff_u8(a.data(), b.data(), a.size()) ==
          simd::count_diff_u8_scalar(a.data(), b.data(), a.size()));
    CHECK(simd::sum_absdiff_u8(a.data(), b.data(), a.size()) ==
          simd::sum_absdiff_u8_scalar(a.data(), b.data(), a.size()));
}
