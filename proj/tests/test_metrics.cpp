#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chaoslab/metrics.hpp"
#include "oracles.hpp"

using namespace chaoslab;

namespace {

ImageBuffer random_image(std::mt19937_64& rng, int w, int h, int c) {
    ImageBuffer img = ImageBuffer::make(w, h, c);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(rng());
    return img;
}

ImageBuffer filled(int w, int h, int c, std::uint8_t v) {
    ImageBuffer img = ImageBuffer::make(w, h, c);
    std::fill(img.data.begin(), img.data.end(), v);
    return img;
}

}  // namespace

TEST_CASE("npcr pinned values") {
    ImageBuffer a = filled(256, 256, 3, 9);
    CHECK(npcr(a, a) == std::vector<double>{0.0, 0.0, 0.0});

    ImageBuffer b = filled(256, 256, 3, 10);
    CHECK(npcr(a, b) == std::vector<double>{100.0, 100.0, 100.0});

    // exactly one pixel of one channel differs: 100/65536 percent
    ImageBuffer c = a;
    c.at(17, 200, 1) = 77;
    const auto v = npcr(a, c);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 100.0 / 65536.0);
    CHECK(v[2] == 0.0);
}

TEST_CASE("uaci pinned values") {
    ImageBuffer zero = filled(64, 64, 3, 0);
    CHECK(uaci(zero, zero) == std::vector<double>{0.0, 0.0, 0.0});

    ImageBuffer max = filled(64, 64, 3, 255);
    CHECK(uaci(zero, max) == std::vector<double>{100.0, 100.0, 100.0});

    // all-0 vs all-85: 100 * 85/255 = 33.333...
    ImageBuffer gray85 = filled(64, 64, 3, 85);
    const auto v = uaci(zero, gray85);
    for (double x : v) CHECK(x == doctest::Approx(100.0 * 85.0 / 255.0).epsilon(1e-14));
}

TEST_CASE("metrics require identical shapes") {
    ImageBuffer a = filled(4, 4, 3, 0);
    ImageBuffer b = filled(4, 5, 3, 0);
    ImageBuffer c = filled(4, 4, 1, 0);
    CHECK_THROWS_AS(npcr(a, b), DimensionMismatch);
    CHECK_THROWS_AS(uaci(a, c), DimensionMismatch);
}

TEST_CASE("npcr/uaci match the brute-force double loop exactly") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> dim(1, 40);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = dim(rng);
        const int h = dim(rng);
        const int c = (trial % 2) ? 3 : 1;
        ImageBuffer a = random_image(rng, w, h, c);
        ImageBuffer b = random_image(rng, w, h, c);
        CHECK(npcr(a, b) == oracle::npcr_bruteforce(a, b));
        CHECK(uaci(a, b) == oracle::uaci_bruteforce(a, b));
    }
}

TEST_CASE("metric bounds hold under fuzzing") {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<int> dim(1, 32);
    for (int trial = 0; trial < 200; ++trial) {
        const int c = (trial % 2) ? 3 : 1;
        const int w = dim(rng);
        const int h = dim(rng);
        ImageBuffer a = random_image(rng, w, h, c);
        ImageBuffer b = random_image(rng, w, h, c);
        for (double v : npcr(a, b)) {
            CHECK(v >= 0.0);
            CHECK(v <= 100.0);
        }
        for (double v : uaci(a, b)) {
            CHECK(v >= 0.0);
            CHECK(v <= 100.0);
        }
    }
}

TEST_CASE("differential test with an identity cipher sees only the flip") {
    std::mt19937_64 rng(23);
    ImageBuffer img = random_image(rng, 32, 32, 3);
    DiffMetrics dm = differential_test_with(
        img, [](const ImageBuffer& p) { return p; }, 1);
    // exactly one byte differs, in exactly one channel
    double total = 0.0;
    for (double v : dm.npcr) total += v;
    CHECK(total == doctest::Approx(100.0 / (32.0 * 32.0)).epsilon(1e-12));
    // averages are the channel means
    CHECK(dm.npcr_avg ==
          doctest::Approx((dm.npcr[0] + dm.npcr[1] + dm.npcr[2]) / 3.0)
              .epsilon(1e-15));
    CHECK(dm.uaci_avg ==
          doctest::Approx((dm.uaci[0] + dm.uaci[1] + dm.uaci[2]) / 3.0)
              .epsilon(1e-15));
}

TEST_CASE("differential test is deterministic given a seed and parallelism-independent") {
    std::mt19937_64 rng(24);
    ImageBuffer img = random_image(rng, 24, 24, 3);
    CipherKey key;
    DiffMetrics a = differential_test(img, key, 4, 2, 123, 1);
    DiffMetrics b = differential_test(img, key, 4, 2, 123, 3);
    CHECK(a.npcr == b.npcr);
    CHECK(a.uaci == b.uaci);
    CHECK(a.npcr_avg == b.npcr_avg);

    DiffMetrics c = differential_test(img, key, 4, 2, 124, 1);
    CHECK(a.npcr != c.npcr);  // different trial draws

    CHECK_THROWS_AS(differential_test(img, key, 0), std::invalid_argument);
}

TEST_CASE("differential test on a small real encryption lands near ideal") {
    std::mt19937_64 rng(25);
    ImageBuffer img = random_image(rng, 64, 64, 3);
    CipherKey key;
    DiffMetrics dm = differential_test(img, key, 5);
    // 64x64 per channel: ideal NPCR ~ 99.61, UACI ~ 33.46; loose bands for
    // the small image
    CHECK(dm.npcr_avg > 99.0);
    CHECK(dm.npcr_avg <= 100.0);
    CHECK(dm.uaci_avg > 32.0);
    CHECK(dm.uaci_avg < 35.0);
}
