/****************************************************************
 * Rational reconstruction of the Mumford coefficients: Pade
 * approximation of each t-series against explicit degree bounds.
 *
 * The U-coefficients are even functions of the moving point, so
 * they are plain rational fractions in t. The V-coefficients are
 * odd: V_i(t) = v(t) * (rational in t). Reconstruction therefore
 * divides the V rows by the local expansion v(t) first, and
 * evaluation multiplies the y-coordinate of the point back in.
 ****************************************************************/
#ifndef HYPISO_RATIONAL_HPP
#define HYPISO_RATIONAL_HPP

#include "series.hpp"

namespace hypiso {

struct Fraction {
    ZPoly num, den;  // in t; den(0) = 1
};

struct RationalRepresentation {
    Elem u0, v0;  // expansion basepoint on the source curve
    unsigned g = 0;
    std::vector<Fraction> u_fracs;  // coefficients of U, degree-g slot is monic
    std::vector<Fraction> v_fracs;  // coefficients of V divided by y(Q)
};

/* Fraction with deg num <= d_num, deg den <= d_den, den(0) = 1 and
 * num/den = s mod t^{d_num+d_den+1}. Hankel linear solve over the
 * local ring with unit pivoting; NoSolution when no such fraction
 * exists at these bounds. */
Fraction pade(const TruncatedSeries& s, unsigned d_num, unsigned d_den);

// num/den - s vanishes mod t^{window}?
bool fraction_matches(const Fraction& fr, const TruncatedSeries& s, unsigned window);

/* Apply pade with bounds (bound, bound) to every z-coefficient of
 * Usol and Vsol. v_series is the local expansion v(t); when given,
 * V rows are divided by it before reconstruction (pass nullptr for
 * data that is already plainly rational). Requires n >= 2*bound+2. */
RationalRepresentation reconstruct(const SeriesPoly& Usol, const SeriesPoly& Vsol,
                                   unsigned bound, const TruncatedSeries* v_series,
                                   const Elem& u0, const Elem& v0);

/* Mumford pair over the residue field (or an extension of it) at the
 * point (u_value, v_value): t = u_value - u0, U-rows evaluate
 * directly, V-rows pick up the factor v_value. Fractions are reduced
 * mod p and embedded into `field` (degree-1 coefficients only). */
std::pair<ZPoly, ZPoly> evaluate(const RationalRepresentation& repr, const Ctx& field,
                                 const Elem& u_value, const Elem& v_value);

// rewrite a fraction in the user variable u = u0 + t
Fraction fraction_in_u(const Ctx& ctx, const Fraction& fr, const Elem& u0);

} // namespace hypiso

#endif
