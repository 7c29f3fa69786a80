// Differential metrics for encrypted images: NPCR (percentage of pixel
// positions whose values differ) and UACI (mean absolute intensity change,
// normalized by 255), per channel and averaged, plus the randomized
// one-pixel-flip differential test.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "chaoslab/cipher.hpp"
#include "chaoslab/image.hpp"

namespace chaoslab {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One value per channel, in percent.
std::vector<double> npcr(const ImageBuffer& c1, const ImageBuffer& c2);
std::vector<double> uaci(const ImageBuffer& c1, const ImageBuffer& c2);

struct DiffMetrics {
    int channels = 0;
    std::vector<double> npcr;  // per channel, percent
    std::vector<double> uaci;  // per channel, percent
    double npcr_avg = 0.0;
    double uaci_avg = 0.0;
};

// Mean NPCR/UACI over n_trials single-pixel flips: each trial picks a random
// pixel and channel (mt19937_64, trial-indexed seeding for reproducibility),
// shifts that byte by +/-1 mod 256, encrypts both plaintexts through
// encrypt_fn and accumulates the per-channel metrics.
DiffMetrics differential_test_with(
    const ImageBuffer& img,
    const std::function<ImageBuffer(const ImageBuffer&)>& encrypt_fn,
    int n_trials, std::uint64_t seed = 0x5eedf00dull, int n_threads = 0);

// The same test driven by the real cipher.
DiffMetrics differential_test(const ImageBuffer& img, const CipherKey& key,
                              int n_trials, int rounds = 2,
                              std::uint64_t seed = 0x5eedf00dull,
                              int n_threads = 0);

}  // namespace chaoslab
