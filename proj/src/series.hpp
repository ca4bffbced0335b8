/****************************************************************
 * Truncated power series in t over the fixed-point ring, and
 * polynomials in z with series coefficients (z-major layout).
 *
 * Multiplication goes through Kronecker substitution into one
 * big-integer product (GMP), so both the t and z directions are
 * quasi-linear; small operands fall back to the schoolbook loop.
 ****************************************************************/
#ifndef HYPISO_SERIES_HPP
#define HYPISO_SERIES_HPP

#include <cstdint>
#include <vector>

#include "padic.hpp"
#include "zpoly.hpp"

namespace hypiso {

class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(const Ctx& ctx, unsigned n);  // zero series mod t^n

    const Ctx& ctx() const { return *ctx_; }
    unsigned n() const { return n_; }
    unsigned loss() const { return loss_; }
    void set_loss(unsigned l) { loss_ = l; }
    void bump_loss(unsigned l) { loss_ = std::max(loss_, l); }

    Elem coeff(unsigned i) const;
    void set_coeff(unsigned i, const Elem& e);
    std::uint64_t* raw() { return a_.data(); }
    const std::uint64_t* raw() const { return a_.data(); }

    // first t-degree with a nonzero stored coefficient, or n if none
    unsigned valuation() const;

    TruncatedSeries truncated(unsigned n2) const;      // n2 <= n
    TruncatedSeries extended(unsigned n2) const;       // zero-pad to n2 >= n
    TruncatedSeries reduced_mod(unsigned digits) const;

    bool is_zero() const;
    // value comparison: same ring, truncation and coefficients (loss ignored)
    bool operator==(const TruncatedSeries& o) const;

private:
    friend class SeriesPoly;
    friend TruncatedSeries ts_mul(const TruncatedSeries&, const TruncatedSeries&, unsigned);
    const Ctx* ctx_ = nullptr;
    std::vector<std::uint64_t> a_;  // n*d words, [t][basis]
    unsigned n_ = 0;
    unsigned loss_ = 0;
};

TruncatedSeries ts_const(const Ctx& ctx, unsigned n, const Elem& e);
TruncatedSeries ts_one(const Ctx& ctx, unsigned n);

TruncatedSeries ts_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries ts_sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries ts_neg(const TruncatedSeries& a);
TruncatedSeries ts_mul(const TruncatedSeries& a, const TruncatedSeries& b, unsigned nout = 0);
TruncatedSeries ts_scale(const TruncatedSeries& a, const Elem& s);
TruncatedSeries ts_arith(const TruncatedSeries& a, const TruncatedSeries& b, ArithOp op);

/* Termwise antiderivative with zero constant term; the truncation
 * grows to n+1. Coefficient i is divided by i+1; the p-part of that
 * division goes through divide_by_p_power, so the series loss grows
 * by max_i v_p(i+1). Throws NonIntegralIntegral when a stored
 * coefficient is not divisible by the required power of p. */
TruncatedSeries ts_integrate(const TruncatedSeries& a);
TruncatedSeries ts_derive(const TruncatedSeries& a);  // truncation drops to n-1

// inverse of a series with unit constant term (Newton, exact)
TruncatedSeries ts_inv(const TruncatedSeries& a);
/* s with s^2 * F = 1 mod t^n, s(0) = inverse of the given branch
 * (branch^2 = F(0) must hold exactly). */
TruncatedSeries ts_inv_sqrt(const TruncatedSeries& F, const Elem& branch);
Elem ts_eval(const TruncatedSeries& a, const Elem& x);  // plain evaluation of the stored polynomial

/* Polynomial in z over series coefficients. All coefficients share
 * the truncation order and context. */
class SeriesPoly {
public:
    SeriesPoly() = default;
    SeriesPoly(const Ctx& ctx, unsigned n, unsigned zdeg);  // zero with zdeg+1 slots

    int deg() const { return static_cast<int>(zc_.size()) - 1; }
    unsigned n() const;
    const Ctx& ctx() const;
    unsigned loss() const;

    const TruncatedSeries& operator[](size_t i) const { return zc_[i]; }
    TruncatedSeries& operator[](size_t i) { return zc_[i]; }
    size_t size() const { return zc_.size(); }
    void push_back(TruncatedSeries s) { zc_.push_back(std::move(s)); }

    SeriesPoly truncated(unsigned n2) const;
    SeriesPoly extended(unsigned n2) const;
    void trim();  // drop zero leading z-coefficients

    bool is_zero() const;
    bool is_monic() const;  // exact leading coefficient 1

    ZPoly at_t0() const;                       // reduce t -> 0
    SeriesPoly reduced_mod(unsigned digits) const;
    bool operator==(const SeriesPoly&) const = default;

private:
    std::vector<TruncatedSeries> zc_;
};

SeriesPoly sp_from_zpoly(const Ctx& ctx, const ZPoly& a, unsigned n);
SeriesPoly sp_one(const Ctx& ctx, unsigned n);

SeriesPoly sp_add(const SeriesPoly& a, const SeriesPoly& b);
SeriesPoly sp_sub(const SeriesPoly& a, const SeriesPoly& b);
SeriesPoly sp_neg(const SeriesPoly& a);
SeriesPoly sp_mul(const SeriesPoly& a, const SeriesPoly& b, unsigned nout = 0);
SeriesPoly sp_mul_naive(const SeriesPoly& a, const SeriesPoly& b, unsigned nout = 0);
SeriesPoly sp_scale(const SeriesPoly& a, const TruncatedSeries& s);
SeriesPoly sp_deriv_z(const SeriesPoly& a);
SeriesPoly sp_deriv_t(const SeriesPoly& a);
// reversal w.r.t. a stated degree D: coefficient i of the result is coeff D-i
SeriesPoly sp_reverse(const SeriesPoly& a, unsigned D);
TruncatedSeries sp_eval_series(const SeriesPoly& a, const TruncatedSeries& x);

/* Quotient ring B[z]/(U) with U monic of degree g over the series
 * ring B, carried mod t^n. Holds the inverse of rev(U) mod w^{2g},
 * which also drives the Newton-sum kernels. */
struct QuotRing {
    SeriesPoly U;        // monic, degree g
    SeriesPoly inv_revU; // mod w^{2g}
    unsigned g = 0;
    unsigned n = 0;

    const Ctx& ctx() const { return U.ctx(); }
};

QuotRing make_quot_ring(const SeriesPoly& U);

// x mod U (x of any degree), truncated to nout (0 = ring order)
SeriesPoly qr_reduce(const QuotRing& R, const SeriesPoly& x, unsigned nout = 0);
SeriesPoly qr_mul(const QuotRing& R, const SeriesPoly& a, const SeriesPoly& b,
                  unsigned nout = 0);
/* Inverse in B[z]/(U): extended gcd over the residue field at (p, t) = (0, 0),
 * then simultaneous Hensel lifting G <- G(2 - aG) in p and t.
 * Throws NotInvertible when the residue-field gcd is not 1. */
SeriesPoly qr_inv(const QuotRing& R, const SeriesPoly& a);

/* W of degree < g with W^2 * f = 1 mod (U, t^n), given W at order
 * t^start (exact there); also returns V = f*W mod (U, t^n).
 * Throws BadInit if the order-t^0 relation fails. */
std::pair<SeriesPoly, SeriesPoly> inverse_sqrt_mod(const ZPoly& f, const QuotRing& R,
                                                   const SeriesPoly& W_init,
                                                   unsigned start_order);

/* Newton sums s_1..s_count of the roots of U, from the expansion of
 * rev(U')/rev(U); no divisions. count <= 2g-1. */
std::vector<TruncatedSeries> newton_sums(const QuotRing& R, unsigned count);
// s_0..s_{count} including s_0 = g (used by the trace form)
std::vector<TruncatedSeries> newton_sums_from0(const QuotRing& R, unsigned count);

/* r_1..r_count with r_i = sum_j x_j^{i-1} x_j', from -U_t/U; the
 * result truncation is n-1 (one t-derivative). */
std::vector<TruncatedSeries> deriv_sums(const QuotRing& R, unsigned count);

/* Hankel matrix-vector product: row k of the output (k = 1..g) is
 * sum_{i=0}^{g-1} a_{k+i} w_i, with a = a_1..a_{2g-1}. One polynomial
 * product of lengths 2g-1 and g. */
std::vector<TruncatedSeries> hankel_apply(const std::vector<TruncatedSeries>& a,
                                          const std::vector<TruncatedSeries>& w,
                                          unsigned nout = 0);
std::vector<TruncatedSeries> hankel_apply_naive(const std::vector<TruncatedSeries>& a,
                                                const std::vector<TruncatedSeries>& w,
                                                unsigned nout = 0);

// A(T) mod U by Brent-Kung baby-step/giant-step; deg A, deg T < g
SeriesPoly modular_compose(const QuotRing& R, const SeriesPoly& A, const SeriesPoly& T);
SeriesPoly modular_compose_horner(const QuotRing& R, const SeriesPoly& A,
                                  const SeriesPoly& T);

/* Characteristic polynomial of multiplication by T in B[z]/(U):
 * monic of degree g with base-ring coefficients. Trace projection +
 * Newton identities when p > g, division-free Berkowitz fallback
 * otherwise. */
SeriesPoly min_poly_of(const QuotRing& R, const SeriesPoly& T);

// bytes pushed through the Kronecker multiplier (work proxy for benchmarks)
std::uint64_t& kron_byte_counter();

} // namespace hypiso

#endif
