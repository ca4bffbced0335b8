/****************************************************************
 * Doubling Newton iteration on the first Mumford coordinate
 * U(t,z) = prod (z - x_i(t)). One step takes a state that is
 * correct mod t^m to one correct mod t^{n'} with n' <= 2m, never
 * leaving the base ring.
 ****************************************************************/
#ifndef HYPISO_MUMFORD_HPP
#define HYPISO_MUMFORD_HPP

#include <string>

#include "geometry.hpp"
#include "series.hpp"

namespace hypiso {

struct MumfordState {
    SeriesPoly U;    // monic degree g
    SeriesPoly V;    // degree < g, interpolates the y_i
    SeriesPoly W;    // degree < g, interpolates the 1/y_i
    unsigned order;  // t-adic correctness
};

// cumulative wall time per step 1..7 of the iteration
struct StepTimings {
    double seconds[7] = {0, 0, 0, 0, 0, 0, 0};
    void add(const StepTimings& o) {
        for (int i = 0; i < 7; ++i) seconds[i] += o.seconds[i];
    }
};

struct StepOptions {
    StepTimings* timings = nullptr;
    bool flip_step4_sign = false;  // diagnostic probe only
};

/* order-1 state from exact initial data. U0 monic of degree g and
 * separable over the residue field, f - V0^2 = 0 mod U0 exactly,
 * V0 invertible mod (U0, p). */
MumfordState build_initial_state(const Ctx& ctx, const ZPoly& U0, const ZPoly& V0,
                                 const ZPoly& f);

// one Newton step: state at order m -> state at order target <= 2m
MumfordState newton_step(const MumfordState& state, const ZPoly& f, const RHS& G,
                         unsigned target, const StepOptions& opt = {});

struct SolveDiagnostics {
    unsigned precision_loss = 0;
    std::vector<std::string> warnings;
    StepTimings timings;
};

struct SolveResult {
    MumfordState state;  // order n
    SolveDiagnostics diag;
};

/* Theorem-style driver: doubling schedule 1 -> 2 -> ... -> n. The
 * result is correct mod (p^N, t^n) provided ctx.M >= N + floor(log_p n)
 * (a warning is recorded otherwise and the run proceeds). */
SolveResult solve(const ZPoly& f, const ZPoly& U0, const ZPoly& V0, const RHS& G,
                  unsigned n, unsigned N, const Ctx& ctx, const StepOptions& opt = {});

// guard digits demanded by the precision contract
unsigned guard_digits(std::uint64_t p, unsigned n);

/* H(X) X' - G for the current state; every entry vanishes mod
 * t^{order-1} when the state is a valid order-m approximation. */
std::vector<TruncatedSeries> residual(const MumfordState& state, const RHS& G);

// least k such that all residual entries vanish mod t^k
unsigned residual_vanish_order(const MumfordState& state, const RHS& G);

} // namespace hypiso

#endif
