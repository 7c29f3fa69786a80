#include "chaoslab/maps.hpp"

namespace chaoslab {

double apply_unary(UnaryFn f, double t) {
    switch (f) {
        case UnaryFn::SinPi: return std::sin(kPi * t);
        case UnaryFn::Identity: return t;
    }
    return t;
}

double apply_binary(BinaryFn f, double a, double b) {
    switch (f) {
        case BinaryFn::Sum: return a + b;
        case BinaryFn::Product: return a * b;
        case BinaryFn::Mean: return 0.5 * (a + b);
    }
    return a + b;
}

double apply_transfer(TransferFn f, double r, double a, double b) {
    switch (f) {
        case TransferFn::Product: return r * a * b;
        case TransferFn::Mean: return r * 0.5 * (a + b);
    }
    return r * a * b;
}

double apply_base_map(BaseMap f, double r, double x) {
    switch (f) {
        case BaseMap::Logistic: return logistic_step(r, x);
        case BaseMap::Sine: return sine_step(r, x);
    }
    return logistic_step(r, x);
}

double sine_step(double r, double x) { return r * std::sin(kPi * x) / 4.0; }

double logistic_step(double r, double x) { return r * x * (1.0 - x); }

double lt_lower(double r, double x) {
    return r * x * (1.0 - x) + 0.5 * (4.0 - r) * x;
}

double lt_upper(double r, double x) {
    return r * x * (1.0 - x) + 0.5 * (4.0 - r) * (1.0 - x);
}

double lt_step(double r, double x) {
    return x < 0.5 ? lt_lower(r, x) : lt_upper(r, x);
}

namespace {

double cot(double t) { return std::cos(t) / std::sin(t); }

// ---------------------------------------------------------------------------
// Error-free transforms for the wrap.
//
// The hybrid branch values reach ~1e5 (branch 2's 1e5*sqrt term) and ~1e12
// (branch 1's cot term near the guard), so a plain frac(|v|) of the rounded
// sum quantizes the state to ulp(v) -- as coarse as 2^-36. That wipes the
// low-order mantissa bits (which the keystream quantizer reads) and can
// absorb ulp-scale input perturbations entirely. The wrap therefore runs on
// exact sum/product pairs, like libm range reduction, and rounds once at the
// end; the wrapped state keeps full double precision.
// ---------------------------------------------------------------------------

struct HiLo {
    double hi, lo;
};

// Knuth TwoSum: a + b = hi + lo exactly.
HiLo two_sum(double a, double b) {
    const double hi = a + b;
    const double bb = hi - a;
    const double lo = (a - (hi - bb)) + (b - bb);
    return {hi, lo};
}

// Dekker product: a * b = hi + lo exactly (mantissa split, no FMA needed).
HiLo two_prod(double a, double b) {
    constexpr double splitter = 134217729.0;  // 2^27 + 1
    const double hi = a * b;
    const double ca = splitter * a;
    const double a1 = ca - (ca - a);
    const double a2 = a - a1;
    const double cb = splitter * b;
    const double b1 = cb - (cb - b);
    const double b2 = b - b1;
    const double lo = ((a1 * b1 - hi) + a1 * b2 + a2 * b1) + a2 * b2;
    return {hi, lo};
}

// frac(|hi + lo|) rounded once. hi - floor(hi) is exact (Sterbenz), so the
// only rounding is the final addition of the compensation term.
double frac_abs_pair(HiLo v) {
    if (v.hi < 0.0 || (v.hi == 0.0 && v.lo < 0.0)) {
        v.hi = -v.hi;
        v.lo = -v.lo;
    }
    double f = (v.hi - std::floor(v.hi)) + v.lo;
    if (f >= 1.0) f -= 1.0;
    if (f < 0.0) f += 1.0;
    if (f >= 1.0 || f < 0.0) f = 0.0;  // lo pushed f onto the boundary
    return f;
}

// frac(|scale * (big + small)|) with the product and sum kept exact.
double wrapped_scaled_sum(double scale, double big, double small) {
    const HiLo sum = two_sum(big, small);
    const HiLo prod = two_prod(scale, sum.hi);
    const double lo = scale * sum.lo + prod.lo;
    return frac_abs_pair({prod.hi, lo});
}

}  // namespace

bool hcm1_singular(double x) {
    return std::fabs(x) < kSingularEps || x * x < kSingularEps;
}

double hcm1_raw(double r, double x) {
    if (x < 1.0 / 3.0) {
        const double lt = lt_lower(r, x);
        return r * (std::sin(lt) + cot(x * x) + sine_step(r, lt));
    }
    const double lt = lt_upper(r, x);
    return (r + 1.0) * (std::sin(lt) + cot(x) + 1e5 * std::sqrt(x));
}

namespace {

// The wrapped branch value with the dominant term handled exactly.
double hcm1_wrapped(double r, double x) {
    if (x < 1.0 / 3.0) {
        const double lt = lt_lower(r, x);
        return wrapped_scaled_sum(r, cot(x * x),
                                  std::sin(lt) + sine_step(r, lt));
    }
    const double lt = lt_upper(r, x);
    const HiLo big = two_prod(1e5, std::sqrt(x));
    const HiLo sum = two_sum(big.hi, std::sin(lt) + cot(x));
    const HiLo prod = two_prod(r + 1.0, sum.hi);
    const double lo = (r + 1.0) * (big.lo + sum.lo) + prod.lo;
    return frac_abs_pair({prod.hi, lo});
}

}  // namespace

std::optional<double> hcm1_step(double r, double x) {
    if (hcm1_singular(x)) return std::nullopt;
    return hcm1_wrapped(r, x);
}

namespace {

// HCM1 with the nudge rule applied, used inside the composed map.
double hcm1_nudged(double r, double x) {
    if (hcm1_singular(x)) x = kSingularNudge;
    return hcm1_wrapped(r, x);
}

double hcm2_branch_value(const Hcm2Branch& b, double r, double fed,
                         double g_a, double g_b, double lin) {
    return b.omega * apply_unary(b.f, apply_base_map(b.base, r, fed)) +
           b.alpha * apply_transfer(b.g, r, g_a, g_b) +
           apply_unary(b.h, 0.5 * (b.beta - r) * lin);
}

}  // namespace

double hcm2x_step(double r, double x, double y, const Hcm2Config& cfg) {
    const bool low = y < 0.5;
    const Hcm2Branch& b = low ? cfg.x.low : cfg.x.high;
    return wrap_unit(hcm2_branch_value(b, r, x, x, y, low ? x : 1.0 - x));
}

double hcm2y_step(double r, double y, double zeta, const Hcm2Config& cfg) {
    const bool low = zeta < 0.5;
    const Hcm2Branch& b = low ? cfg.y.low : cfg.y.high;
    return wrap_unit(
        hcm2_branch_value(b, r, y, zeta, y, low ? zeta : 1.0 - zeta));
}

double proposed_step(const MapParams& params, const Hcm2Config& cfg, double x) {
    const double rho = hcm1_nudged(params.r1, x);
    const double rho_next = hcm1_nudged(params.r1, rho);
    const double tau1 = hcm2x_step(params.r2, rho, rho_next, cfg);
    const double zeta = cfg.zeta == ZetaChoice::Current ? rho : rho_next;
    const double tau2 = hcm2y_step(params.r2, rho_next, zeta, cfg);
    const double composed =
        apply_unary(params.phi1, apply_binary(params.phi2, tau1, tau2));
    return frac_abs_pair(two_prod(params.gamma, composed));
}

Trajectory iterate(const MapParams& params, const Hcm2Config& cfg,
                   std::size_t n, std::size_t burn_in) {
    Trajectory traj;
    traj.params = params;
    traj.samples.reserve(n);
    State state{params.x0, 0};
    while (state.step_index < burn_in) advance(state, params, cfg);
    const std::size_t last = burn_in + n;
    while (state.step_index < last) {
        advance(state, params, cfg);
        traj.samples.push_back(state.x);
    }
    return traj;
}

}  // namespace chaoslab
