// Core map definitions: the Sine, Logistic and Logistic-Tent base maps, the
// two hybrid stages (HCM1, HCM2x/HCM2y) and the two-parameter composed map
// built from them, plus the orbit iterator.
//
// All state lives in [0,1). Every stage that can leave the unit interval is
// wrapped back by the fractional-part rules below; the hybrid stages keep the
// explicit "mod 1" of their definition and the HCM1 stage (whose branch values
// are unbounded) takes frac(|v|).

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace chaoslab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Guard radius for the cot() terms: inputs with |x| < eps or x^2 < eps are
// treated as singular. hcm1_step() reports them; proposed_step() nudges the
// state to kSingularNudge and carries on, so orbits stay total and
// reproducible.
inline constexpr double kSingularEps = 1e-12;

// Reset point for guarded inputs. The target must keep cot(x^2) numerically
// generic: for x below ~1.6e-4, cot(x^2) rounds to exactly 1/x^2, so any
// short-decimal r makes r*cot(x^2) an exact integer whose fractional part is
// 0 -- and 0 is a fixed point of the composed map, so orbits passing through
// the guard would be absorbed. At 1e-3 the cot series tail (-x^2/3) survives
// rounding and the wrapped value stays state-dependent and non-degenerate.
inline constexpr double kSingularNudge = 1e-3;

// Fractional part mapped into [0,1). The explicit guard handles values a hair
// below an integer where v - floor(v) rounds up to exactly 1.0.
inline double wrap_unit(double v) {
    double f = v - std::floor(v);
    return f < 1.0 ? f : 0.0;
}

// frac(|v|): the wrap rule for the unbounded HCM1 branch values and for the
// final composition output.
inline double wrap_abs(double v) { return wrap_unit(std::fabs(v)); }

// ---------------------------------------------------------------------------
// Configurable function slots
// ---------------------------------------------------------------------------

enum class UnaryFn { SinPi, Identity };            // t -> sin(pi t) | t
enum class BinaryFn { Sum, Product, Mean };        // (a,b) combiners
enum class TransferFn { Product, Mean };           // g(r,a,b) = r*a*b | r*(a+b)/2
enum class BaseMap { Logistic, Sine };             // F(r,x)
enum class ZetaChoice { Current, Next };           // zeta = x_n | x_{n+1}

double apply_unary(UnaryFn f, double t);
double apply_binary(BinaryFn f, double a, double b);
double apply_transfer(TransferFn f, double r, double a, double b);
double apply_base_map(BaseMap f, double r, double x);

// ---------------------------------------------------------------------------
// Base maps
// ---------------------------------------------------------------------------

// Sine map: r*sin(pi x)/4. Unwrapped; total for finite r, x in [0,1).
double sine_step(double r, double x);

// Logistic map: r*x*(1-x).
double logistic_step(double r, double x);

// Logistic-Tent map branches and dispatcher (branch split at x = 0.5, lower
// branch strict). The branches are exposed separately because HCM1 composes
// with a specific branch, not with the dispatched map.
double lt_lower(double r, double x);   // r*x*(1-x) + (4-r)/2 * x
double lt_upper(double r, double x);   // r*x*(1-x) + (4-r)/2 * (1-x)
double lt_step(double r, double x);

// ---------------------------------------------------------------------------
// HCM1: first hybrid stage, branch split at x = 1/3
// ---------------------------------------------------------------------------

// True when x sits inside the cot() guard radius (either cot(x) or cot(x^2)
// would blow up).
bool hcm1_singular(double x);

// Unwrapped branch value:
//   x <  1/3 :  r     * ( sin(LT_lower) + cot(x^2) + sine(r, LT_lower) )
//   x >= 1/3 :  (r+1) * ( sin(LT_upper) + cot(x)   + 1e5*sqrt(x) )
// Unbounded; callers wrap with wrap_abs().
double hcm1_raw(double r, double x);

// Wrapped step. Empty when the input is singular; the caller decides whether
// to nudge (as proposed_step does) or to reject.
std::optional<double> hcm1_step(double r, double x);

// ---------------------------------------------------------------------------
// HCM2: second hybrid stage, one branch set per axis
// ---------------------------------------------------------------------------

// One branch of the 2D hybrid map: value = omega*f(F(r,s)) + alpha*g(r,a,b)
// + h((beta-r)*lin/2), reduced mod 1 by the caller.
struct Hcm2Branch {
    double omega = 1.0;                    // weight of the composed-map term
    double alpha = 1.0;                    // weight of the cross-coupling term
    double beta = 4.0;                     // offset in the linear transfer argument
    UnaryFn f = UnaryFn::SinPi;            // applied on top of the base map
    TransferFn g = TransferFn::Product;    // cross-coupling of the two states
    UnaryFn h = UnaryFn::SinPi;            // applied to the linear term
    BaseMap base = BaseMap::Logistic;      // F
};

struct Hcm2Axis {
    Hcm2Branch low;                        // branch variable <  0.5
    Hcm2Branch high = sine_high();         // branch variable >= 0.5
    static constexpr Hcm2Branch sine_high() {
        Hcm2Branch b;
        b.base = BaseMap::Sine;
        return b;
    }
};

// Full slot configuration of the HCM2x/HCM2y pair. Default construction gives
// the frozen named default: all weights 1, beta 4, f = h = sin(pi .),
// g = r*a*b, F = Logistic (low branch) / Sine (high branch), zeta = x_{n+1}.
struct Hcm2Config {
    Hcm2Axis x;
    Hcm2Axis y;
    ZetaChoice zeta = ZetaChoice::Next;
};

// x-axis update, branch selected by y:
//   y <  0.5 : omega*f(F(r,x)) + alpha*g(r,x,y) + h((beta-r)*x/2)      mod 1
//   y >= 0.5 : omega*f(F(r,x)) + alpha*g(r,x,y) + h((beta-r)*(1-x)/2)  mod 1
double hcm2x_step(double r, double x, double y, const Hcm2Config& cfg);

// y-axis update, branch selected by zeta; same shape with (y, zeta) in place
// of (x, y) and the linear term driven by zeta.
double hcm2y_step(double r, double y, double zeta, const Hcm2Config& cfg);

// ---------------------------------------------------------------------------
// The composed two-parameter map
// ---------------------------------------------------------------------------

struct MapParams {
    double r1 = 0.01;                      // HCM1 stage control parameter
    double r2 = 0.3;                       // HCM2 stage control parameter
    double x0 = 0.5;                       // initial state, in [0,1)
    double gamma = 1e5;                    // composition gain, > 0
    UnaryFn phi1 = UnaryFn::SinPi;
    BinaryFn phi2 = BinaryFn::Sum;
};

// One application of the composed map:
//   rho      = HCM1(r1, x)          (singular inputs nudged to kSingularNudge)
//   rho_next = HCM1(r1, rho)
//   tau1     = HCM2x(r2, rho, rho_next)
//   tau2     = HCM2y(r2, rho_next, zeta)   zeta = rho | rho_next per config
//   result   = frac(|gamma * phi1(phi2(tau1, tau2))|)
double proposed_step(const MapParams& params, const Hcm2Config& cfg, double x);

// Orbit cursor: the current state and how many steps produced it.
struct State {
    double x = 0.0;                        // in [0,1) after every step
    std::size_t step_index = 0;
};

inline void advance(State& state, const MapParams& params, const Hcm2Config& cfg) {
    state.x = proposed_step(params, cfg, state.x);
    ++state.step_index;
}

struct Trajectory {
    std::vector<double> samples;           // every entry in [0,1)
    MapParams params;
};

// n samples of the composed-map orbit after burn_in discarded steps, starting
// from params.x0. samples[0] is the state after the first kept step.
Trajectory iterate(const MapParams& params, const Hcm2Config& cfg,
                   std::size_t n, std::size_t burn_in);

}  // namespace chaoslab
