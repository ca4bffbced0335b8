#include "mumford.hpp"

#include <chrono>

namespace hypiso {

namespace {

struct StepClock {
    using clock = std::chrono::steady_clock;
    StepTimings* tm;
    clock::time_point last = clock::now();
    explicit StepClock(StepTimings* t) : tm(t) {}
    void lap(int step) {
        auto now = clock::now();
        if (tm) tm->seconds[step - 1] += std::chrono::duration<double>(now - last).count();
        last = now;
    }
};

SeriesPoly pad_width(const SeriesPoly& a, unsigned width) {
    SeriesPoly r = a;
    while (r.size() < width) r.push_back(TruncatedSeries(a.ctx(), a.n()));
    return r;
}

} // namespace

unsigned guard_digits(std::uint64_t p, unsigned n) {
    unsigned e = 0;
    std::uint64_t q = p;
    while (q <= n) {
        ++e;
        if (q > n / p) break;
        q *= p;
    }
    return e;
}

MumfordState build_initial_state(const Ctx& ctx, const ZPoly& U0, const ZPoly& V0,
                                 const ZPoly& f) {
    if (U0.deg() < 1 || !zp_is_monic(ctx, U0))
        throw Error(Err::BadInitialData, "U0 must be monic of degree g >= 1");
    unsigned g = static_cast<unsigned>(U0.deg());
    Ctx rctx = ctx.residue();
    ZPoly ubar = zp_reduce_mod_p(ctx, U0, 1);
    if (zp_gcd(rctx, ubar, zp_derivative(rctx, ubar)).deg() != 0)
        throw Error(Err::NotSeparable, "U0 has a repeated root over the residue field");
    ZPoly V0r = V0.deg() >= static_cast<int>(g) ? zp_divrem(ctx, V0, U0).second : V0;
    ZPoly rem = zp_divrem(ctx, zp_sub(ctx, f, zp_mul(ctx, V0r, V0r)), U0).second;
    if (!rem.is_zero())
        throw Error(Err::BadInitialData, "f - V0^2 != 0 mod U0");

    SeriesPoly U = sp_from_zpoly(ctx, U0, 1);
    QuotRing R = make_quot_ring(U);
    SeriesPoly V = pad_width(sp_from_zpoly(ctx, V0r, 1), g);
    SeriesPoly W;
    try {
        W = qr_inv(R, V);
    } catch (const Error& e) {
        if (e.code() == Err::NotInvertible)
            throw Error(Err::WeierstrassImage, "V0 not invertible mod (U0, p)");
        throw;
    }
    return MumfordState{U, V, W, 1};
}

MumfordState newton_step(const MumfordState& state, const ZPoly& f, const RHS& G,
                         unsigned target, const StepOptions& opt) {
    const Ctx& ctx = state.U.ctx();
    unsigned g = static_cast<unsigned>(state.U.deg());
    unsigned m = state.order;
    if (target < m) throw Error(Err::LengthMismatch, "target order below current order");
    if (target > 2 * m) throw Error(Err::LengthMismatch, "target order beyond doubling range");
    if (G.G.size() != g) throw Error(Err::LengthMismatch, "G must have g entries");
    unsigned n = target;

    StepClock clk(opt.timings);
    SeriesPoly Uext = state.U.extended(n);
    QuotRing R = make_quot_ring(Uext);

    // step 1: refresh W, V against U at the new order
    auto [W, V] = inverse_sqrt_mod(f, R, state.W, m);
    clk.lap(1);

    // step 2: Newton sums and their derivative companions
    auto s = newton_sums(R, 2 * g - 1);
    auto r = deriv_sums(R, 2 * g - 1);
    clk.lap(2);

    // step 3: H(X)X' and H(X)X as two Hankel products against W
    std::vector<TruncatedSeries> w(W.size());
    for (size_t i = 0; i < W.size(); ++i) w[i] = W[i];
    auto HXp = hankel_apply(r, w, n - 1);
    auto HX = hankel_apply(s, w, n);
    clk.lap(3);

    // step 4: F = H(X)X + integral(G - H(X)X')
    std::vector<TruncatedSeries> F(g);
    for (unsigned k = 0; k < g; ++k) {
        TruncatedSeries integrand = ts_sub(G.G[k].extended(n - 1), HXp[k]);
        TruncatedSeries I = ts_integrate(integrand);  // truncation n
        F[k] = opt.flip_step4_sign ? ts_sub(HX[k], I) : ts_add(HX[k], I);
    }
    clk.lap(4);

    // step 5: D = sum_k F_k z^{g+1-k}; Q = z-degrees g+1..2g of U*D
    SeriesPoly D(ctx, n, g + 1);
    for (unsigned k = 1; k <= g; ++k) D[g + 1 - k] = F[k - 1];
    SeriesPoly P = sp_mul(Uext, D, n);
    SeriesPoly Q(ctx, n, g - 1);
    for (unsigned i = 0; i < g; ++i)
        if (g + 1 + i < P.size()) Q[i] = P[g + 1 + i];
    clk.lap(5);

    // step 6: T = Q V / U' in the quotient ring
    SeriesPoly UpInv = qr_inv(R, sp_deriv_z(Uext));
    SeriesPoly T = qr_mul(R, qr_mul(R, Q, V), UpInv);
    clk.lap(6);

    // step 7: U_n = characteristic polynomial of multiplication by T
    SeriesPoly Un = min_poly_of(R, T);
    clk.lap(7);

    // refresh V, W against the new modulus (counted with step 1)
    QuotRing Rn = make_quot_ring(Un);
    auto [Wn, Vn] = inverse_sqrt_mod(f, Rn, W, m);
    clk.lap(1);

    return MumfordState{Un, Vn, Wn, n};
}

SolveResult solve(const ZPoly& f, const ZPoly& U0, const ZPoly& V0, const RHS& G,
                  unsigned n, unsigned N, const Ctx& ctx, const StepOptions& opt) {
    if (n < 1) throw Error(Err::LengthMismatch, "target order must be >= 1");
    SolveResult res;
    res.state = build_initial_state(ctx, U0, V0, f);
    unsigned guard = guard_digits(ctx.p(), n);
    if (ctx.M() < N + guard)
        res.diag.warnings.push_back(
            "InsufficientPrecision: M = " + std::to_string(ctx.M()) + " < N + floor(log_p n) = " +
            std::to_string(N + guard) + "; results carry fewer correct digits");
    StepOptions local = opt;
    StepTimings tm;
    if (!local.timings) local.timings = &tm;
    while (res.state.order < n) {
        unsigned target = std::min(2 * res.state.order, n);
        res.state = newton_step(res.state, f, G, target, local);
    }
    if (opt.timings == nullptr) res.diag.timings = tm;
    else res.diag.timings = *opt.timings;
    res.diag.precision_loss = std::max(res.state.U.loss(), res.state.V.loss());
    return res;
}

std::vector<TruncatedSeries> residual(const MumfordState& state, const RHS& G) {
    const Ctx& ctx = state.U.ctx();
    unsigned g = static_cast<unsigned>(state.U.deg());
    unsigned n = state.U.n();
    QuotRing R = make_quot_ring(state.U);
    auto r = deriv_sums(R, 2 * g - 1);
    std::vector<TruncatedSeries> w(state.W.size());
    for (size_t i = 0; i < state.W.size(); ++i) w[i] = state.W[i];
    unsigned nm1 = n > 0 ? n - 1 : 0;
    auto HXp = hankel_apply(r, w, nm1);
    std::vector<TruncatedSeries> out;
    out.reserve(g);
    for (unsigned k = 0; k < g; ++k)
        out.push_back(ts_sub(HXp[k], G.G[k].extended(nm1)));
    (void)ctx;
    return out;
}

unsigned residual_vanish_order(const MumfordState& state, const RHS& G) {
    unsigned v = ~0u;
    for (const auto& e : residual(state, G)) v = std::min(v, e.valuation());
    return v;
}

} // namespace hypiso
