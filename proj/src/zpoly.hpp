/****************************************************************
 * Dense polynomials over the fixed-point ring (one variable,
 * Elem coefficients, low degree first). Division and gcd pivot
 * on unit leading coefficients; over the residue field (M = 1)
 * that is ordinary field arithmetic.
 ****************************************************************/
#ifndef HYPISO_ZPOLY_HPP
#define HYPISO_ZPOLY_HPP

#include <vector>

#include "padic.hpp"

namespace hypiso {

struct ZPoly {
    std::vector<Elem> c;  // empty means the zero polynomial

    ZPoly() = default;
    explicit ZPoly(std::vector<Elem> v) : c(std::move(v)) {}
    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

void zp_trim(ZPoly& a);
ZPoly zp_const(const Ctx& ctx, const Elem& e);
ZPoly zp_one(const Ctx& ctx);
ZPoly zp_x(const Ctx& ctx);  // the monomial z

ZPoly zp_add(const Ctx& ctx, const ZPoly& a, const ZPoly& b);
ZPoly zp_sub(const Ctx& ctx, const ZPoly& a, const ZPoly& b);
ZPoly zp_mul(const Ctx& ctx, const ZPoly& a, const ZPoly& b);
ZPoly zp_scale(const Ctx& ctx, const ZPoly& a, const Elem& s);
ZPoly zp_neg(const Ctx& ctx, const ZPoly& a);

Elem zp_eval(const Ctx& ctx, const ZPoly& a, const Elem& x);
ZPoly zp_derivative(const Ctx& ctx, const ZPoly& a);
ZPoly zp_reduce_mod_p(const Ctx& ctx, const ZPoly& a, unsigned digits);

bool zp_equal(const ZPoly& a, const ZPoly& b);
bool zp_is_monic(const Ctx& ctx, const ZPoly& a);

// quotient and remainder; the divisor's leading coefficient must be a unit
std::pair<ZPoly, ZPoly> zp_divrem(const Ctx& ctx, const ZPoly& a, const ZPoly& b);

// divide by the unit leading coefficient
ZPoly zp_make_monic(const Ctx& ctx, const ZPoly& a);

/* Euclidean gcd with unit pivoting: every remainder in the chain must
 * have a unit leading coefficient (always true over the residue field).
 * Throws DegenerateDivisor when that fails over a non-field ring. */
ZPoly zp_gcd(const Ctx& ctx, ZPoly a, ZPoly b);

// extended gcd: returns (g, u, v) monic g with u*a + v*b = g
std::tuple<ZPoly, ZPoly, ZPoly> zp_xgcd(const Ctx& ctx, const ZPoly& a, const ZPoly& b);

// monic product of (z - x_i)
ZPoly zp_from_roots(const Ctx& ctx, const std::vector<Elem>& xs);

// Lagrange interpolation; differences x_i - x_j must be units
ZPoly zp_interpolate(const Ctx& ctx, const std::vector<Elem>& xs,
                     const std::vector<Elem>& ys);

// Taylor shift a(z + s)
ZPoly zp_shift(const Ctx& ctx, const ZPoly& a, const Elem& s);

} // namespace hypiso

#endif
