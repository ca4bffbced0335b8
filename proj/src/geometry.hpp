/****************************************************************
 * Hyperelliptic curve data y^2 = f(x) with deg f = 2g+1, local
 * expansions at a non-Weierstrass point, and construction of the
 * right-hand side G(t) and initial Mumford data.
 ****************************************************************/
#ifndef HYPISO_GEOMETRY_HPP
#define HYPISO_GEOMETRY_HPP

#include "series.hpp"

namespace hypiso {

struct CurveData {
    ZPoly f;      // degree 2g+1, unit leading coefficient, squarefree mod p
    unsigned g;
    const Ctx* ctx;
};

struct CurvePoint {
    Elem u0, v0;  // v0^2 = f(u0); v0 a unit for expansion purposes
};

struct RHS {
    std::vector<TruncatedSeries> G;  // g entries over the base context
};

/* Lift a squarefree degree-(2g+1) polynomial over the residue field,
 * coefficientwise by least nonnegative representatives. */
CurveData lift_curve(const Ctx& ctx, const ZPoly& f_bar);

// validate an already-lifted f (unit lc, odd degree, smooth reduction)
CurveData make_curve(const Ctx& ctx, const ZPoly& f);

// u(t) = u0 + t and v(t) = sqrt(f(u0+t)) on the branch v(0) = v0
std::pair<TruncatedSeries, TruncatedSeries> local_expansion(const CurveData& curve,
                                                            const CurvePoint& Q, unsigned n);

/* G_i(t) = ell * u(t)^{i-1} u'(t) / v(t), i = 1..g (the exponent
 * convention matches the Hankel rows, exponents 0..g-1). */
RHS build_G_mult_ell(const CurveData& curve, const CurvePoint& Q, std::uint64_t ell,
                     unsigned n);

// G = Mmat * (u^{i-1} u' / v)_{i=1..g} for a g x g action matrix
RHS build_G_matrix(const CurveData& curve, const CurvePoint& Q,
                   const std::vector<std::vector<Elem>>& Mmat, unsigned n);

/* Mumford data of a list of g affine points given over an extension
 * context (same p, M; degree ext.d()): U0 = prod (z - x_i), V0 the
 * Lagrange interpolant. The result must descend to the target context
 * (NotRational otherwise); x_i must be distinct mod p (CollidingRoots)
 * and y_i units (WeierstrassImage). */
std::pair<ZPoly, ZPoly> mumford_from_points(const Ctx& target, const Ctx& ext,
                                            const std::vector<std::pair<Elem, Elem>>& pts);

} // namespace hypiso

#endif
