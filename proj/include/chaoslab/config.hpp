// Run configuration: every tunable of the map, the analyses and the cipher,
// with defaults matching the shipped named default configuration. Values load
// from a JSON file and are overridden by CLI flags (CLI > file > defaults).

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/maps.hpp"

namespace chaoslab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnalysisConfig {
    std::size_t iterations = 140000;   // generate / histogram sample count
    std::size_t burn_in = 0;           // generate / histogram burn-in
    int bins = 100;
    SweepAxis sweep = SweepAxis::R1;
    double range_lo = 0.0;
    double range_hi = 1.0;
    int points = 100;                  // sweep sample count
    std::size_t bifurcation_burn_in = 500;
    int keep = 200;                    // bifurcation states kept per r
    std::size_t lyapunov_iterations = 100000;
    double d0 = 1e-10;
    PerturbTarget perturb = PerturbTarget::X0;
    double delta = 1e-16;
    std::size_t horizon = 100;
    double threshold = 0.1;
    std::size_t cobweb_steps = 500;
    int threads = 0;                   // 0 = hardware concurrency
};

struct CryptoConfig {
    int rounds = 2;
    std::uint64_t nonce = 0;
    int trials = 20;
};

struct RunConfig {
    MapParams map;
    Hcm2Config hcm2;
    AnalysisConfig analysis;
    CryptoConfig crypto;
};

// Parses and applies a JSON config file over `cfg`. Unknown keys, type
// mismatches and malformed JSON raise ConfigError; parse errors carry the
// line number.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Same, from an in-memory JSON document (used by tests and the file loader).
void apply_config_text(RunConfig& cfg, const std::string& text,
                       const std::string& origin = "<config>");

// Range/precondition checks across the whole bundle; ConfigError on failure.
void validate(const RunConfig& cfg);

// Enum <-> config-string tables (shared by the config file and CLI flags).
UnaryFn parse_unary_fn(const std::string& s);
BinaryFn parse_binary_fn(const std::string& s);
TransferFn parse_transfer_fn(const std::string& s);
BaseMap parse_base_map(const std::string& s);
ZetaChoice parse_zeta_choice(const std::string& s);
SweepAxis parse_sweep_axis(const std::string& s);
PerturbTarget parse_perturb_target(const std::string& s);

std::string to_string(UnaryFn v);
std::string to_string(BinaryFn v);
std::string to_string(TransferFn v);
std::string to_string(BaseMap v);
std::string to_string(ZetaChoice v);
std::string to_string(SweepAxis v);
std::string to_string(PerturbTarget v);

}  // namespace chaoslab
