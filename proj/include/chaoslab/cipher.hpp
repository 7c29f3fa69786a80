// Chaos-keyed image cipher: a permutation stage (argsort of orbit samples)
// followed by an additive byte-chaining diffusion stage, applied for a
// configurable number of rounds. The keystream is the composed-map orbit
// after a fixed burn-in; bytes are the low eight bits of floor(x * 2^53).
//
// Keystream schedule: one main stream drives all rounds in order — round k
// consumes width*height*channels samples for its permutation and then the
// same count of bytes for its diffusion pass. The diffusion chain seed of
// round k is byte k of a separate stream whose nonce is offset by a fixed
// tag, so seeds never alias main-stream bytes. Decryption rebuilds the same
// schedule and applies the stages inverted, rounds in reverse.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chaoslab/image.hpp"
#include "chaoslab/maps.hpp"

namespace chaoslab {

inline constexpr std::size_t kKeystreamBurnIn = 1000;
inline constexpr std::uint64_t kSeedStreamTag = 0x9e3779b97f4a7c15ull;

struct CipherKey {
    MapParams params;
    Hcm2Config cfg;
    std::uint64_t nonce = 0;  // mixed into x0 as frac(x0 + nonce * 2^-53)
};

class Keystream {
  public:
    explicit Keystream(const CipherKey& key, std::uint64_t stream_tag = 0);

    // Next orbit sample in [0,1).
    double next_state();

    // floor(x * 2^40) mod 256 of the next orbit sample: low-order mantissa
    // bits, which carry the chaotic fine structure (see cipher.cpp on why
    // this window and not the very bottom bits).
    std::uint8_t next_byte();

    std::vector<double> take_states(std::size_t n);
    std::vector<std::uint8_t> take_bytes(std::size_t n);

  private:
    MapParams params_;
    Hcm2Config cfg_;
    double x_;
};

std::vector<std::uint8_t> derive_keystream(const CipherKey& key,
                                           std::size_t n_bytes);

enum class Direction { Forward, Inverse };

// Additive chaining over a flat buffer: Forward computes
// c[i] = (p[i] + ks[i] + c[i-1]) mod 256 with c[-1] = seed; Inverse undoes it
// exactly. ks must be at least data-sized.
void diffuse_bytes(std::span<std::uint8_t> data,
                   std::span<const std::uint8_t> ks, std::uint8_t seed,
                   Direction direction);

// Permutation of 0..n-1 by argsort of n fresh stream samples, ties broken by
// index.
std::vector<std::uint32_t> chaos_permutation(Keystream& stream, std::size_t n);

// Standalone stages (each derives its material from the start of a fresh
// stream for `key`). permute gathers out[i] = in[perm[i]].
ImageBuffer permute(const ImageBuffer& img, const CipherKey& key);
ImageBuffer inverse_permute(const ImageBuffer& img, const CipherKey& key);
ImageBuffer diffuse(const ImageBuffer& img, const CipherKey& key,
                    Direction direction);

// rounds x (permute then diffuse) under the scheduled keystream; decrypt is
// the exact inverse.
ImageBuffer encrypt(const ImageBuffer& img, const CipherKey& key, int rounds = 2);
ImageBuffer decrypt(const ImageBuffer& img, const CipherKey& key, int rounds = 2);

}  // namespace chaoslab
