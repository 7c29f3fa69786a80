// Chaos diagnostics over the map core: largest-Lyapunov-exponent estimation,
// bifurcation scans, histogram uniformity with a chi-square test, sensitivity
// probes and cobweb traces. Everything is pure given its inputs; the sweep
// functions fan out over parameter values with thread-count-independent
// output order.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "chaoslab/maps.hpp"

namespace chaoslab {

enum class SweepAxis { R1, R2 };

// ---------------------------------------------------------------------------
// Lyapunov exponent (two-trajectory renormalization)
// ---------------------------------------------------------------------------

struct LyapunovResult {
    double r1 = 0.0;
    double r2 = 0.0;
    double lambda = 0.0;        // nats per iteration; -inf when degenerate
    std::size_t n_iters = 0;
    std::size_t n_renorm = 0;   // rescales performed
    bool degenerate = false;    // orbits collapsed bit-identically
};

// Estimates the largest exponent of an arbitrary 1D step function by running
// a companion orbit at separation d0, accumulating ln(d/d0) each step and
// rescaling the companion back to d0 along the separation direction. The map
// may be non-smooth; no derivatives are used. If the two orbits stay
// bit-identical for more than 100 consecutive steps the orbit is flagged
// degenerate and lambda is the -inf sentinel.
//
// Requires n_iters >= 1000 and 0 < d0 <= 1e-9.
LyapunovResult lyapunov_estimate_fn(const std::function<double(double)>& step,
                                    double x0, std::size_t n_iters, double d0);

// Same estimator applied to the composed map, starting from params.x0.
LyapunovResult lyapunov_estimate(const MapParams& params, const Hcm2Config& cfg,
                                 std::size_t n_iters, double d0 = 1e-10);

// Exponent across a parameter sweep. The swept axis takes n_points midpoint
// samples of [lo, hi] (r_i = lo + (i+0.5)(hi-lo)/n); the other parameter and
// x0 come from `base`. Runs parameter points in parallel; output is ordered
// by r regardless of thread count. n_threads = 0 picks hardware concurrency.
std::vector<LyapunovResult> lyapunov_sweep(const MapParams& base,
                                           const Hcm2Config& cfg,
                                           SweepAxis axis, double lo, double hi,
                                           int n_points, std::size_t n_iters,
                                           double d0 = 1e-10, int n_threads = 0);

// ---------------------------------------------------------------------------
// Bifurcation scan
// ---------------------------------------------------------------------------

struct BifurcationPoint {
    double r = 0.0;
    double x = 0.0;
};

// For each of n_r midpoint-sampled r values in [lo, hi]: burn burn_in steps
// from x0, then record n_keep consecutive states. Output is grouped by r in
// ascending order, n_r * n_keep points, independent of parallel execution.
std::vector<BifurcationPoint> bifurcation_scan(const MapParams& base,
                                               const Hcm2Config& cfg,
                                               SweepAxis axis, double lo,
                                               double hi, int n_r, double x0,
                                               std::size_t burn_in, int n_keep,
                                               int n_threads = 0);

// ---------------------------------------------------------------------------
// Histogram uniformity / chi-square
// ---------------------------------------------------------------------------

struct HistogramReport {
    std::vector<std::uint64_t> bin_counts;
    std::size_t n_samples = 0;
    int n_bins = 0;
    double chi2 = 0.0;
    double p_value = 1.0;
};

// Survival function of the chi-square distribution (upper tail probability)
// with dof degrees of freedom, via the regularized incomplete gamma function.
double chi2_sf(double chi2, int dof);

// Bins samples into n_bins equal-width bins over [0,1) and tests against the
// uniform expectation with Pearson chi-square, n_bins - 1 degrees of freedom.
HistogramReport histogram_uniformity(std::span<const double> samples, int n_bins);

inline HistogramReport histogram_uniformity(const Trajectory& traj, int n_bins) {
    return histogram_uniformity(std::span<const double>(traj.samples), n_bins);
}

// 256-bin uniformity test over raw bytes (keystream and ciphertext checks).
HistogramReport byte_uniformity(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Sensitivity probe
// ---------------------------------------------------------------------------

enum class PerturbTarget { X0, R1, R2 };

// The requested perturbation was absorbed by floating-point rounding
// (base + delta == base), so the probe would compare identical orbits.
struct PerturbationLost : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SensitivityReport {
    std::optional<std::size_t> divergence_step;  // first step with gap > threshold (1-based)
    double max_gap = 0.0;
    double perturbation = 0.0;
    std::vector<double> base;       // horizon states of the reference orbit
    std::vector<double> perturbed;  // horizon states of the perturbed orbit
};

SensitivityReport sensitivity_probe(const MapParams& params,
                                    const Hcm2Config& cfg, PerturbTarget target,
                                    double delta, std::size_t horizon,
                                    double threshold);

// ---------------------------------------------------------------------------
// Cobweb trace
// ---------------------------------------------------------------------------

struct CobwebSegment {
    double x_from, y_from, x_to, y_to;
};

// The standard cobweb construction from params.x0: for each step the vertical
// segment (x,x)->(x,x') followed by the horizontal (x,x')->(x',x').
// Exactly 2*n_steps segments; data only, no rendering.
std::vector<CobwebSegment> cobweb_trace(const MapParams& params,
                                        const Hcm2Config& cfg,
                                        std::size_t n_steps);

// Midpoint sample i of n over [lo, hi]; the sweep grid used by the scans.
inline double sweep_value(double lo, double hi, int n, int i) {
    return lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(n);
}

}  // namespace chaoslab
