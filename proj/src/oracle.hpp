/****************************************************************
 * Independent references for differential testing: the coordinate-
 * wise Newton solver (naive dense linear algebra, no Hankel
 * structure), forward-generated instances with known solutions,
 * and Cantor's group law on reduced divisors.
 ****************************************************************/
#ifndef HYPISO_ORACLE_HPP
#define HYPISO_ORACLE_HPP

#include <random>

#include "geometry.hpp"
#include "mumford.hpp"

namespace hypiso {

struct SplitInstance {
    ZPoly f;
    std::vector<Elem> X0, Y0;  // distinct x_i mod p, unit y_i, y_i^2 = f(x_i)
    RHS G;
};

/* Direct doubling iteration on the coordinate vector X(t), with
 * y_i(t) maintained as the square root of f(x_i(t)). Dense g x g
 * solves; throws SingularH when H(X_0) is singular mod p. */
std::vector<TruncatedSeries> solve_coordinatewise(const Ctx& ctx, const SplitInstance& inst,
                                                  unsigned n);

/* Instance with a known polynomial solution: X(t) random of degree
 * < n with distinct unit x_i(0) and unit y_i, G := H(X)X'. */
struct ForwardInstance {
    ZPoly f;
    std::vector<TruncatedSeries> X;  // the exact solution, truncation n
    std::vector<Elem> Y0;
    RHS G;        // truncation n
    SeriesPoly U_exact;  // prod (z - x_i(t)) mod t^n
    ZPoly U0, V0;
};
ForwardInstance make_forward_instance(const Ctx& ctx, unsigned g, unsigned n,
                                      std::mt19937_64& rng);

SplitInstance split_of_forward(const ForwardInstance& fw);

// interpolation over the series ring (nodes distinct mod p)
SeriesPoly series_interpolate(const Ctx& ctx, const std::vector<TruncatedSeries>& xs,
                              const std::vector<TruncatedSeries>& ys);

// Mumford state at order m built from exact coordinate series
MumfordState state_from_coordinates(const Ctx& ctx, const ZPoly& f,
                                    const std::vector<TruncatedSeries>& x,
                                    const std::vector<Elem>& y0, unsigned m);

/* ---- Cantor arithmetic on reduced divisors (a, b), deg b < deg a
 * <= g, a | f - b^2. Over the residue field (M = 1) this is the
 * classical group law; over the ring mod p^M the same chains run as
 * long as every pivot stays a unit (DegenerateDivisor otherwise). */
struct ReducedDivisor {
    ZPoly a, b;
};

ReducedDivisor cantor_identity(const Ctx& ctx);
ReducedDivisor divisor_of_point(const Ctx& ctx, const Elem& x, const Elem& y);
bool divisor_equal(const ReducedDivisor& A, const ReducedDivisor& B);
bool divisor_is_reduced(const Ctx& ctx, const CurveData& curve, const ReducedDivisor& D);

ReducedDivisor cantor_neg(const Ctx& ctx, const ReducedDivisor& D);
ReducedDivisor cantor_add(const Ctx& ctx, const CurveData& curve, const ReducedDivisor& D1,
                          const ReducedDivisor& D2);
ReducedDivisor cantor_mul(const Ctx& ctx, const CurveData& curve, const ReducedDivisor& D,
                          std::uint64_t ell);

} // namespace hypiso

#endif
