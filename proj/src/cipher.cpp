#include "chaoslab/cipher.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace chaoslab {

namespace {

// Nonce offset quantum. 2^-53 is one ulp at the top binade of [0,1): every
// small nonce moves x0 by at least one representable step. A 2^-64 quantum
// would be absorbed by rounding for nonces below ~2^10, silently reusing the
// same orbit.
constexpr double kNonceQuantum = 0x1p-53;

// Byte = mantissa bits 33..40 of the state (floor(x * 2^40) mod 256). The
// window sits below every density feature of the orbit but above the bits
// that are structurally degenerate: the state is frac of an exact
// gamma-scaled product whose binary expansion stops near 2^-48 (gamma = 1e5
// carries a 2^5 factor), and the final rounding ties bias the last bit, so a
// bottom-of-mantissa window is measurably non-uniform.
std::uint8_t quantize_byte(double x) {
    return static_cast<std::uint8_t>(
        static_cast<std::uint64_t>(x * 0x1p40) & 0xffu);
}

}  // namespace

Keystream::Keystream(const CipherKey& key, std::uint64_t stream_tag)
    : params_(key.params), cfg_(key.cfg) {
    const std::uint64_t mixed = key.nonce + stream_tag;  // wrapping add
    x_ = wrap_unit(params_.x0 + static_cast<double>(mixed) * kNonceQuantum);
    for (std::size_t i = 0; i < kKeystreamBurnIn; ++i)
        x_ = proposed_step(params_, cfg_, x_);
}

double Keystream::next_state() {
    x_ = proposed_step(params_, cfg_, x_);
    return x_;
}

std::uint8_t Keystream::next_byte() { return quantize_byte(next_state()); }

std::vector<double> Keystream::take_states(std::size_t n) {
    std::vector<double> out(n);
    for (double& v : out) v = next_state();
    return out;
}

std::vector<std::uint8_t> Keystream::take_bytes(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (std::uint8_t& b : out) b = next_byte();
    return out;
}

std::vector<std::uint8_t> derive_keystream(const CipherKey& key,
                                           std::size_t n_bytes) {
    if (n_bytes < 1)
        throw std::invalid_argument("derive_keystream: n_bytes must be >= 1");
    Keystream stream(key);
    return stream.take_bytes(n_bytes);
}

void diffuse_bytes(std::span<std::uint8_t> data,
                   std::span<const std::uint8_t> ks, std::uint8_t seed,
                   Direction direction) {
    if (ks.size() < data.size())
        throw std::invalid_argument("diffuse_bytes: keystream too short");
    std::uint8_t prev = seed;
    if (direction == Direction::Forward) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            prev = static_cast<std::uint8_t>(data[i] + ks[i] + prev);
            data[i] = prev;
        }
    } else {
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::uint8_t cipher = data[i];
            data[i] = static_cast<std::uint8_t>(cipher - ks[i] - prev);
            prev = cipher;
        }
    }
}

std::vector<std::uint32_t> chaos_permutation(Keystream& stream, std::size_t n) {
    const std::vector<double> samples = stream.take_states(n);
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (samples[a] != samples[b]) return samples[a] < samples[b];
        return a < b;
    });
    return perm;
}

namespace {

void apply_permutation(std::vector<std::uint8_t>& data,
                       const std::vector<std::uint32_t>& perm) {
    std::vector<std::uint8_t> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[perm[i]];
    data = std::move(out);
}

void apply_inverse_permutation(std::vector<std::uint8_t>& data,
                               const std::vector<std::uint32_t>& perm) {
    std::vector<std::uint8_t> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out[perm[i]] = data[i];
    data = std::move(out);
}

struct RoundMaterial {
    std::vector<std::uint32_t> perm;
    std::vector<std::uint8_t> bytes;
    std::uint8_t seed;
};

std::vector<RoundMaterial> build_schedule(const CipherKey& key, int rounds,
                                          std::size_t n) {
    Keystream main_stream(key);
    Keystream seed_stream(key, kSeedStreamTag);
    std::vector<RoundMaterial> schedule;
    schedule.reserve(static_cast<std::size_t>(rounds));
    for (int r = 0; r < rounds; ++r) {
        RoundMaterial m;
        m.perm = chaos_permutation(main_stream, n);
        m.bytes = main_stream.take_bytes(n);
        m.seed = seed_stream.next_byte();
        schedule.push_back(std::move(m));
    }
    return schedule;
}

void check_rounds(int rounds) {
    if (rounds < 1) throw std::invalid_argument("cipher: rounds must be >= 1");
}

}  // namespace

ImageBuffer permute(const ImageBuffer& img, const CipherKey& key) {
    Keystream stream(key);
    const auto perm = chaos_permutation(stream, img.size_bytes());
    ImageBuffer out = img;
    apply_permutation(out.data, perm);
    return out;
}

ImageBuffer inverse_permute(const ImageBuffer& img, const CipherKey& key) {
    Keystream stream(key);
    const auto perm = chaos_permutation(stream, img.size_bytes());
    ImageBuffer out = img;
    apply_inverse_permutation(out.data, perm);
    return out;
}

ImageBuffer diffuse(const ImageBuffer& img, const CipherKey& key,
                    Direction direction) {
    Keystream stream(key);
    Keystream seed_stream(key, kSeedStreamTag);
    const auto ks = stream.take_bytes(img.size_bytes());
    const std::uint8_t seed = seed_stream.next_byte();
    ImageBuffer out = img;
    diffuse_bytes(out.data, ks, seed, direction);
    return out;
}

ImageBuffer encrypt(const ImageBuffer& img, const CipherKey& key, int rounds) {
    check_rounds(rounds);
    const auto schedule = build_schedule(key, rounds, img.size_bytes());
    ImageBuffer out = img;
    for (const RoundMaterial& m : schedule) {
        apply_permutation(out.data, m.perm);
        diffuse_bytes(out.data, m.bytes, m.seed, Direction::Forward);
    }
    return out;
}

ImageBuffer decrypt(const ImageBuffer& img, const CipherKey& key, int rounds) {
    check_rounds(rounds);
    const auto schedule = build_schedule(key, rounds, img.size_bytes());
    ImageBuffer out = img;
    for (auto it = schedule.rbegin(); it != schedule.rend(); ++it) {
        diffuse_bytes(out.data, it->bytes, it->seed, Direction::Inverse);
        apply_inverse_permutation(out.data, it->perm);
    }
    return out;
}

}  // namespace chaoslab
