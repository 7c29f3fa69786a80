#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "chaoslab/cipher.hpp"
#include "chaoslab/dynamics.hpp"

using namespace chaoslab;

namespace {

ImageBuffer random_image(std::mt19937_64& rng, int w, int h, int c) {
    ImageBuffer img = ImageBuffer::make(w, h, c);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(rng());
    return img;
}

}  // namespace

TEST_CASE("keystream is deterministic in the key and has the right length") {
    CipherKey key;
    const auto a = derive_keystream(key, 4096);
    const auto b = derive_keystream(key, 4096);
    CHECK(a.size() == 4096);
    CHECK(a == b);

    CipherKey other = key;
    other.nonce = 1;
    CHECK(derive_keystream(other, 4096) != a);

    CHECK_THROWS_AS(derive_keystream(key, 0), std::invalid_argument);
}

TEST_CASE("keystream bytes pass the 256-bin uniformity test") {
    CipherKey key;
    const auto bytes = derive_keystream(key, 1000000);
    const auto rep = byte_uniformity(bytes);
    INFO("chi2 = ", rep.chi2, " p = ", rep.p_value);
    CHECK(rep.p_value > 0.001);
}

TEST_CASE("keys differing by 1e-15 in x0 give almost disjoint keystreams") {
    CipherKey a;
    CipherKey b = a;
    b.params.x0 = a.params.x0 + 1e-15;
    const auto ka = derive_keystream(a, 10000);
    const auto kb = derive_keystream(b, 10000);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < ka.size(); ++i) diff += ka[i] != kb[i];
    CHECK(static_cast<double>(diff) / static_cast<double>(ka.size()) >= 0.99);
}

TEST_CASE("chaos permutation visits every index once") {
    CipherKey key;
    Keystream stream(key);
    const auto perm = chaos_permutation(stream, 5000);
    std::vector<bool> seen(perm.size(), false);
    for (auto i : perm) {
        REQUIRE(i < seen.size());
        CHECK_FALSE(seen[i]);
        seen[i] = true;
    }
}

TEST_CASE("permute inverts exactly and preserves the byte multiset") {
    std::mt19937_64 rng(11);
    CipherKey key;
    for (auto [w, h, c] : {std::tuple{1, 1, 1}, {4, 4, 3}, {31, 17, 1}, {64, 64, 3}}) {
        ImageBuffer img = random_image(rng, w, h, c);
        ImageBuffer scrambled = permute(img, key);
        CHECK(inverse_permute(scrambled, key) == img);

        auto a = img.data;
        auto b = scrambled.data;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
    // single byte: only one arrangement
    ImageBuffer tiny = random_image(rng, 1, 1, 1);
    CHECK(permute(tiny, key) == tiny);
}

TEST_CASE("diffuse_bytes: worked two-pixel example and exact inverse") {
    // all-zero plaintext, keystream (5, 7), seed 0:
    // c0 = 0+5+0 = 5, c1 = 0+7+5 = 12
    std::vector<std::uint8_t> data{0, 0};
    const std::vector<std::uint8_t> ks{5, 7};
    diffuse_bytes(data, ks, 0, Direction::Forward);
    CHECK(data[0] == 5);
    CHECK(data[1] == 12);
    diffuse_bytes(data, ks, 0, Direction::Inverse);
    CHECK(data == std::vector<std::uint8_t>{0, 0});

    std::mt19937_64 rng(12);
    CipherKey key;
    ImageBuffer img = random_image(rng, 16, 16, 3);
    CHECK(diffuse(diffuse(img, key, Direction::Forward), key,
                  Direction::Inverse) == img);
}

TEST_CASE("diffusion propagates a flip to every subsequent byte") {
    std::mt19937_64 rng(13);
    std::size_t changed = 0, subsequent = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> base(256), ks(256);
        for (auto& b : base) b = static_cast<std::uint8_t>(rng());
        for (auto& b : ks) b = static_cast<std::uint8_t>(rng());
        auto flipped = base;
        const std::size_t pos = rng() % 200;
        flipped[pos] = static_cast<std::uint8_t>(flipped[pos] + 1 + rng() % 254);

        diffuse_bytes(base, ks, 42, Direction::Forward);
        diffuse_bytes(flipped, ks, 42, Direction::Forward);
        for (std::size_t i = pos; i < base.size(); ++i) {
            ++subsequent;
            changed += base[i] != flipped[i];
        }
    }
    CHECK(static_cast<double>(changed) / static_cast<double>(subsequent) >= 0.99);
}

TEST_CASE("encrypt/decrypt round-trips bit exactly") {
    std::mt19937_64 rng(14);
    CipherKey key;
    std::uniform_int_distribution<int> dim(1, 48);
    for (int trial = 0; trial < 50; ++trial) {
        const int c = (trial % 2) ? 3 : 1;
        ImageBuffer img = random_image(rng, dim(rng), dim(rng), c);
        for (int rounds : {1, 2, 3}) {
            ImageBuffer enc = encrypt(img, key, rounds);
            CHECK(decrypt(enc, key, rounds) == img);
            if (img.size_bytes() > 16) CHECK(enc != img);
        }
    }
    ImageBuffer img = random_image(rng, 8, 8, 3);
    CHECK_THROWS_AS(encrypt(img, key, 0), std::invalid_argument);
}

TEST_CASE("decrypt of an all-zero image is well-defined") {
    CipherKey key;
    ImageBuffer zero = ImageBuffer::make(16, 16, 1);
    ImageBuffer out = decrypt(zero, key, 2);
    CHECK(out.size_bytes() == zero.size_bytes());
}

TEST_CASE("a wrong key fails to recover the plaintext") {
    std::mt19937_64 rng(15);
    CipherKey key;
    CipherKey wrong = key;
    wrong.params.x0 = key.params.x0 + 1e-15;

    ImageBuffer img = random_image(rng, 64, 64, 3);
    ImageBuffer garbage = decrypt(encrypt(img, key, 2), wrong, 2);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < img.data.size(); ++i)
        diff += img.data[i] != garbage.data[i];
    CHECK(static_cast<double>(diff) / static_cast<double>(img.data.size()) >= 0.99);
}

TEST_CASE("nonce variants produce unrelated ciphertexts under one base key") {
    std::mt19937_64 rng(16);
    CipherKey a;
    CipherKey b = a;
    b.nonce = 77;
    ImageBuffer img = random_image(rng, 32, 32, 3);
    ImageBuffer ca = encrypt(img, a, 2);
    ImageBuffer cb = encrypt(img, b, 2);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < ca.data.size(); ++i)
        diff += ca.data[i] != cb.data[i];
    CHECK(static_cast<double>(diff) / static_cast<double>(ca.data.size()) > 0.9);
    CHECK(decrypt(cb, b, 2) == img);
}

TEST_CASE("encrypted channels of the synthetic photo have flat histograms") {
    CipherKey key;
    ImageBuffer img = synthetic_photo(128, 128, 3);
    ImageBuffer enc = encrypt(img, key, 2);
    for (int c = 0; c < 3; ++c) {
        std::vector<std::uint8_t> plane(enc.pixel_count());
        for (std::size_t i = 0; i < plane.size(); ++i)
            plane[i] = enc.data[i * 3 + static_cast<std::size_t>(c)];
        CHECK(byte_uniformity(plane).p_value > 0.001);
    }
}
