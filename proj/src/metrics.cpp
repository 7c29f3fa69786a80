#include "chaoslab/metrics.hpp"

#include <random>
#include <thread>

#include "chaoslab/simd_kernels.hpp"

namespace chaoslab {

namespace {

void require_same_shape(const ImageBuffer& c1, const ImageBuffer& c2) {
    if (!c1.same_shape(c2))
        throw DimensionMismatch("metric inputs must have identical dimensions");
}

// Gathers one channel into a contiguous buffer so the byte kernels can run
// on flat arrays. For single-channel images the data is already flat.
std::vector<std::uint8_t> channel_plane(const ImageBuffer& img, int c) {
    const std::size_t n = img.pixel_count();
    std::vector<std::uint8_t> plane(n);
    const std::uint8_t* src = img.data.data() + c;
    for (std::size_t i = 0; i < n; ++i) plane[i] = src[i * img.channels];
    return plane;
}

template <typename Kernel>
std::vector<double> per_channel_metric(const ImageBuffer& c1,
                                       const ImageBuffer& c2, Kernel kernel,
                                       double denom_scale) {
    require_same_shape(c1, c2);
    const std::size_t n = c1.pixel_count();
    std::vector<double> out(static_cast<std::size_t>(c1.channels));
    for (int c = 0; c < c1.channels; ++c) {
        std::uint64_t raw;
        if (c1.channels == 1) {
            raw = kernel(c1.data.data(), c2.data.data(), n);
        } else {
            const auto p1 = channel_plane(c1, c);
            const auto p2 = channel_plane(c2, c);
            raw = kernel(p1.data(), p2.data(), n);
        }
        out[static_cast<std::size_t>(c)] =
            100.0 * static_cast<double>(raw) /
            (denom_scale * static_cast<double>(n));
    }
    return out;
}

}  // namespace

std::vector<double> npcr(const ImageBuffer& c1, const ImageBuffer& c2) {
    return per_channel_metric(c1, c2, simd::count_diff_u8, 1.0);
}

std::vector<double> uaci(const ImageBuffer& c1, const ImageBuffer& c2) {
    return per_channel_metric(c1, c2, simd::sum_absdiff_u8, 255.0);
}

DiffMetrics differential_test_with(
    const ImageBuffer& img,
    const std::function<ImageBuffer(const ImageBuffer&)>& encrypt_fn,
    int n_trials, std::uint64_t seed, int n_threads) {
    if (n_trials < 1)
        throw std::invalid_argument("differential_test: n_trials must be >= 1");

    const std::size_t trials = static_cast<std::size_t>(n_trials);
    const ImageBuffer base_cipher = encrypt_fn(img);

    std::vector<std::vector<double>> trial_npcr(trials), trial_uaci(trials);

    auto run_trial = [&](std::size_t t) {
        std::mt19937_64 rng(seed + t);
        std::uniform_int_distribution<std::size_t> pixel_dist(
            0, img.pixel_count() - 1);
        std::uniform_int_distribution<int> channel_dist(0, img.channels - 1);
        std::uniform_int_distribution<int> sign_dist(0, 1);

        ImageBuffer flipped = img;
        const std::size_t index =
            pixel_dist(rng) * static_cast<std::size_t>(img.channels) +
            static_cast<std::size_t>(channel_dist(rng));
        const int delta = sign_dist(rng) ? 1 : -1;
        flipped.data[index] =
            static_cast<std::uint8_t>(flipped.data[index] + delta);

        const ImageBuffer flipped_cipher = encrypt_fn(flipped);
        trial_npcr[t] = npcr(base_cipher, flipped_cipher);
        trial_uaci[t] = uaci(base_cipher, flipped_cipher);
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = n_threads > 0 ? static_cast<std::size_t>(n_threads)
                                        : (hw > 0 ? hw : 1);
    workers = std::min(workers, trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < trials; t += workers) run_trial(t);
            });
        for (auto& th : pool) th.join();
    }

    DiffMetrics result;
    result.channels = img.channels;
    result.npcr.assign(static_cast<std::size_t>(img.channels), 0.0);
    result.uaci.assign(static_cast<std::size_t>(img.channels), 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        for (int c = 0; c < img.channels; ++c) {
            result.npcr[c] += trial_npcr[t][c];
            result.uaci[c] += trial_uaci[t][c];
        }
    }
    for (int c = 0; c < img.channels; ++c) {
        result.npcr[c] /= static_cast<double>(trials);
        result.uaci[c] /= static_cast<double>(trials);
        result.npcr_avg += result.npcr[c];
        result.uaci_avg += result.uaci[c];
    }
    result.npcr_avg /= img.channels;
    result.uaci_avg /= img.channels;
    return result;
}

DiffMetrics differential_test(const ImageBuffer& img, const CipherKey& key,
                              int n_trials, int rounds, std::uint64_t seed,
                              int n_threads) {
    return differential_test_with(
        img, [&](const ImageBuffer& p) { return encrypt(p, key, rounds); },
        n_trials, seed, n_threads);
}

}  // namespace chaoslab
