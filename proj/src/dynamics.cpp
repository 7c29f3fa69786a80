#include "chaoslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace chaoslab {

namespace {

// Runs fn(i) for i in [0, n) across up to n_threads workers. Each index owns
// its output slot, so results are identical for any thread count.
void parallel_for(std::size_t n, int n_threads,
                  const std::function<void(std::size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = n_threads > 0 ? static_cast<std::size_t>(n_threads)
                                        : (hw > 0 ? hw : 1);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

constexpr std::size_t kDegenerateRunLimit = 100;

}  // namespace

LyapunovResult lyapunov_estimate_fn(const std::function<double(double)>& step,
                                    double x0, std::size_t n_iters, double d0) {
    if (n_iters < 1000)
        throw std::invalid_argument("lyapunov: n_iters must be >= 1000");
    if (!(d0 > 0.0) || d0 > 1e-9)
        throw std::invalid_argument("lyapunov: d0 must satisfy 0 < d0 <= 1e-9");

    LyapunovResult res;
    res.n_iters = n_iters;

    double x = x0;
    double y = x0 + d0 < 1.0 ? x0 + d0 : x0 - d0;
    double log_sum = 0.0;
    std::size_t zero_run = 0;

    for (std::size_t k = 0; k < n_iters; ++k) {
        x = step(x);
        y = step(y);
        const double d = std::fabs(y - x);
        if (d == 0.0) {
            if (++zero_run > kDegenerateRunLimit) {
                res.lambda = -std::numeric_limits<double>::infinity();
                res.degenerate = true;
                return res;
            }
            y = x + d0 < 1.0 ? x + d0 : x - d0;  // re-split and keep going
            continue;
        }
        zero_run = 0;
        log_sum += std::log(d / d0);
        // Rescale the companion back to separation d0 on the same side,
        // flipping only if that would leave [0,1).
        const double side = y > x ? d0 : -d0;
        y = x + side;
        if (y < 0.0 || y >= 1.0) y = x - side;
        ++res.n_renorm;
    }
    res.lambda = log_sum / static_cast<double>(n_iters);
    return res;
}

LyapunovResult lyapunov_estimate(const MapParams& params, const Hcm2Config& cfg,
                                 std::size_t n_iters, double d0) {
    LyapunovResult res = lyapunov_estimate_fn(
        [&](double x) { return proposed_step(params, cfg, x); }, params.x0,
        n_iters, d0);
    res.r1 = params.r1;
    res.r2 = params.r2;
    return res;
}

std::vector<LyapunovResult> lyapunov_sweep(const MapParams& base,
                                           const Hcm2Config& cfg,
                                           SweepAxis axis, double lo, double hi,
                                           int n_points, std::size_t n_iters,
                                           double d0, int n_threads) {
    if (n_points < 1)
        throw std::invalid_argument("lyapunov_sweep: n_points must be >= 1");
    // validate estimator preconditions before fanning out; a throw inside a
    // worker thread would terminate the process
    if (n_iters < 1000)
        throw std::invalid_argument("lyapunov: n_iters must be >= 1000");
    if (!(d0 > 0.0) || d0 > 1e-9)
        throw std::invalid_argument("lyapunov: d0 must satisfy 0 < d0 <= 1e-9");
    std::vector<LyapunovResult> out(static_cast<std::size_t>(n_points));
    parallel_for(out.size(), n_threads, [&](std::size_t i) {
        MapParams p = base;
        const double r = sweep_value(lo, hi, n_points, static_cast<int>(i));
        (axis == SweepAxis::R1 ? p.r1 : p.r2) = r;
        out[i] = lyapunov_estimate(p, cfg, n_iters, d0);
    });
    return out;
}

std::vector<BifurcationPoint> bifurcation_scan(const MapParams& base,
                                               const Hcm2Config& cfg,
                                               SweepAxis axis, double lo,
                                               double hi, int n_r, double x0,
                                               std::size_t burn_in, int n_keep,
                                               int n_threads) {
    if (n_r < 1) throw std::invalid_argument("bifurcation: n_r must be >= 1");
    if (n_keep < 1)
        throw std::invalid_argument("bifurcation: n_keep must be >= 1");
    const std::size_t keep = static_cast<std::size_t>(n_keep);
    std::vector<BifurcationPoint> out(static_cast<std::size_t>(n_r) * keep);
    parallel_for(static_cast<std::size_t>(n_r), n_threads, [&](std::size_t i) {
        MapParams p = base;
        p.x0 = x0;
        const double r = sweep_value(lo, hi, n_r, static_cast<int>(i));
        (axis == SweepAxis::R1 ? p.r1 : p.r2) = r;
        Trajectory traj = iterate(p, cfg, keep, burn_in);
        for (std::size_t k = 0; k < keep; ++k)
            out[i * keep + k] = BifurcationPoint{r, traj.samples[k]};
    });
    return out;
}

// ---------------------------------------------------------------------------
// chi-square
// ---------------------------------------------------------------------------

namespace {

// Regularized upper incomplete gamma Q(a, x): series for the lower tail when
// x < a+1, Lentz continued fraction for the upper tail otherwise.
double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefix) * h;
}

HistogramReport finish_report(std::vector<std::uint64_t> counts,
                              std::size_t n_samples) {
    HistogramReport rep;
    rep.n_bins = static_cast<int>(counts.size());
    rep.n_samples = n_samples;
    const double expected =
        static_cast<double>(n_samples) / static_cast<double>(counts.size());
    double chi2 = 0.0;
    for (std::uint64_t c : counts) {
        const double dev = static_cast<double>(c) - expected;
        chi2 += dev * dev / expected;
    }
    rep.bin_counts = std::move(counts);
    rep.chi2 = chi2;
    rep.p_value = chi2_sf(chi2, rep.n_bins - 1);
    return rep;
}

}  // namespace

double chi2_sf(double chi2, int dof) {
    if (dof < 1) throw std::invalid_argument("chi2_sf: dof must be >= 1");
    const double q = gamma_q(0.5 * static_cast<double>(dof), 0.5 * chi2);
    return std::clamp(q, 0.0, 1.0);
}

HistogramReport histogram_uniformity(std::span<const double> samples,
                                     int n_bins) {
    if (n_bins < 2)
        throw std::invalid_argument("histogram: n_bins must be >= 2");
    if (samples.empty())
        throw std::invalid_argument("histogram: samples must be non-empty");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (double v : samples) {
        auto bin = static_cast<std::size_t>(v * static_cast<double>(n_bins));
        if (bin >= counts.size()) bin = counts.size() - 1;
        ++counts[bin];
    }
    return finish_report(std::move(counts), samples.size());
}

HistogramReport byte_uniformity(std::span<const std::uint8_t> bytes) {
    if (bytes.empty())
        throw std::invalid_argument("byte_uniformity: empty input");
    std::vector<std::uint64_t> counts(256, 0);
    for (std::uint8_t b : bytes) ++counts[b];
    return finish_report(std::move(counts), bytes.size());
}

// ---------------------------------------------------------------------------
// sensitivity & cobweb
// ---------------------------------------------------------------------------

SensitivityReport sensitivity_probe(const MapParams& params,
                                    const Hcm2Config& cfg, PerturbTarget target,
                                    double delta, std::size_t horizon,
                                    double threshold) {
    if (horizon < 1)
        throw std::invalid_argument("sensitivity: horizon must be >= 1");
    if (delta == 0.0)
        throw std::invalid_argument("sensitivity: delta must be non-zero");

    MapParams pert = params;
    double* slot = nullptr;
    switch (target) {
        case PerturbTarget::X0: slot = &pert.x0; break;
        case PerturbTarget::R1: slot = &pert.r1; break;
        case PerturbTarget::R2: slot = &pert.r2; break;
    }
    const double before = *slot;
    *slot = before + delta;
    if (*slot == before)
        throw PerturbationLost("sensitivity: delta underflows the target value");

    SensitivityReport rep;
    rep.perturbation = delta;
    rep.base.reserve(horizon);
    rep.perturbed.reserve(horizon);

    double xb = params.x0;
    double xp = pert.x0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        xb = proposed_step(params, cfg, xb);
        xp = proposed_step(pert, cfg, xp);
        rep.base.push_back(xb);
        rep.perturbed.push_back(xp);
        const double gap = std::fabs(xb - xp);
        if (gap > rep.max_gap) rep.max_gap = gap;
        if (!rep.divergence_step && gap > threshold) rep.divergence_step = n;
    }
    return rep;
}

std::vector<CobwebSegment> cobweb_trace(const MapParams& params,
                                        const Hcm2Config& cfg,
                                        std::size_t n_steps) {
    if (n_steps < 1)
        throw std::invalid_argument("cobweb: n_steps must be >= 1");
    std::vector<CobwebSegment> segments;
    segments.reserve(2 * n_steps);
    double x = params.x0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double next = proposed_step(params, cfg, x);
        segments.push_back(CobwebSegment{x, x, x, next});
        segments.push_back(CobwebSegment{x, next, next, next});
        x = next;
    }
    return segments;
}

}  // namespace chaoslab
