#include "oracle.hpp"

namespace hypiso {

namespace {

TruncatedSeries eval_poly_at_series(const Ctx& ctx, const ZPoly& f,
                                    const TruncatedSeries& x) {
    TruncatedSeries r(ctx, x.n());
    for (size_t i = f.c.size(); i-- > 0;)
        r = ts_add(ts_mul(r, x, x.n()), ts_const(ctx, x.n(), f.c[i]));
    return r;
}

/* Solve H * X = rhs over the series ring by Gaussian elimination,
 * pivoting on entries whose t^0 coefficient is a unit. */
std::vector<TruncatedSeries> solve_linear_series(const Ctx& ctx,
                                                 std::vector<std::vector<TruncatedSeries>> H,
                                                 std::vector<TruncatedSeries> rhs,
                                                 unsigned n) {
    size_t g = rhs.size();
    std::vector<size_t> colperm(g);
    for (size_t i = 0; i < g; ++i) colperm[i] = i;
    for (size_t k = 0; k < g; ++k) {
        size_t pi = g, pj = g;
        for (size_t i = k; i < g && pi == g; ++i)
            for (size_t j = k; j < g; ++j)
                if (is_unit(ctx, H[i][j].coeff(0))) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == g) throw Error(Err::SingularH, "no unit pivot in H");
        std::swap(H[k], H[pi]);
        std::swap(rhs[k], rhs[pi]);
        for (size_t i = 0; i < g; ++i) std::swap(H[i][k], H[i][pj]);
        std::swap(colperm[k], colperm[pj]);
        TruncatedSeries piv = ts_inv(H[k][k]);
        for (size_t j = k; j < g; ++j) H[k][j] = ts_mul(H[k][j], piv, n);
        rhs[k] = ts_mul(rhs[k], piv, n);
        for (size_t i = 0; i < g; ++i) {
            if (i == k || H[i][k].is_zero()) continue;
            TruncatedSeries factor = H[i][k];
            for (size_t j = k; j < g; ++j)
                H[i][j] = ts_sub(H[i][j], ts_mul(factor, H[k][j], n));
            rhs[i] = ts_sub(rhs[i], ts_mul(factor, rhs[k], n));
        }
    }
    std::vector<TruncatedSeries> out(g, TruncatedSeries(ctx, n));
    for (size_t k = 0; k < g; ++k) out[colperm[k]] = rhs[k];
    return out;
}

} // namespace

std::vector<TruncatedSeries> solve_coordinatewise(const Ctx& ctx, const SplitInstance& inst,
                                                  unsigned n) {
    unsigned g = static_cast<unsigned>(inst.X0.size());
    if (inst.Y0.size() != g || inst.G.G.size() != g)
        throw Error(Err::LengthMismatch, "split instance dimensions disagree");
    for (unsigned i = 0; i < g; ++i) {
        if (!is_unit(ctx, inst.Y0[i])) throw Error(Err::SingularH, "y_i(0) not a unit");
        for (unsigned j = i + 1; j < g; ++j)
            if (!is_unit(ctx, sub(ctx, inst.X0[i], inst.X0[j])))
                throw Error(Err::SingularH, "x_i(0) collide mod p");
    }
    std::vector<TruncatedSeries> X;
    for (unsigned i = 0; i < g; ++i) X.push_back(ts_const(ctx, 1, inst.X0[i]));
    unsigned cur = 1;
    while (cur < n) {
        unsigned tgt = std::min(2 * cur, n);
        for (auto& x : X) x = x.extended(tgt);
        // y_i and H from the current approximation
        std::vector<TruncatedSeries> yinv;
        for (unsigned i = 0; i < g; ++i) {
            TruncatedSeries F = eval_poly_at_series(ctx, inst.f, X[i]);
            yinv.push_back(ts_inv_sqrt(F, inst.Y0[i]));
        }
        std::vector<std::vector<TruncatedSeries>> H(g,
                                                    std::vector<TruncatedSeries>(g));
        for (unsigned j = 0; j < g; ++j) {
            TruncatedSeries pw = ts_one(ctx, tgt);
            for (unsigned k = 0; k < g; ++k) {
                H[k][j] = ts_mul(pw, yinv[j], tgt);
                if (k + 1 < g) pw = ts_mul(pw, X[j], tgt);
            }
        }
        std::vector<TruncatedSeries> I;
        for (unsigned k = 0; k < g; ++k) {
            TruncatedSeries acc(ctx, tgt - 1);
            for (unsigned j = 0; j < g; ++j)
                acc = ts_add(acc, ts_mul(H[k][j].truncated(tgt - 1), ts_derive(X[j]), tgt - 1));
            I.push_back(ts_integrate(ts_sub(inst.G.G[k].extended(tgt - 1), acc)));
        }
        auto delta = solve_linear_series(ctx, H, I, tgt);
        for (unsigned j = 0; j < g; ++j) X[j] = ts_add(X[j], delta[j]);
        cur = tgt;
    }
    return X;
}

ForwardInstance make_forward_instance(const Ctx& ctx, unsigned g, unsigned n,
                                      std::mt19937_64& rng) {
    auto qopt = ctx.residue_card();
    if (!qopt || *qopt - 1 < g)
        throw Error(Err::Unsupported, "residue field too small for g distinct unit roots");
    ForwardInstance fw;
    auto rand_elem = [&] {
        Elem e = elem_zero(ctx);
        for (auto& x : e.c) x = rng() % ctx.pM();
        return e;
    };
    // distinct unit starting points with square unit f-values
    std::vector<Elem> x0;
    for (int attempt = 0; attempt < 20000; ++attempt) {
        fw.f.c.clear();
        for (unsigned i = 0; i < 2 * g + 2; ++i) fw.f.c.push_back(rand_elem());
        fw.f.c.back() = elem_one(ctx);
        x0.clear();
        for (int inner = 0; inner < 2000 && x0.size() < g; ++inner) {
            Elem cand = rand_elem();
            if (!is_unit(ctx, cand)) continue;
            bool ok = true;
            for (const auto& prev : x0)
                if (!is_unit(ctx, sub(ctx, prev, cand))) ok = false;
            if (!ok) continue;
            Elem fv = zp_eval(ctx, fw.f, cand);
            if (!is_unit(ctx, fv) || !residue_is_square(ctx, fv)) continue;
            x0.push_back(cand);
        }
        if (x0.size() == g) break;
    }
    if (x0.size() != g)
        throw Error(Err::Unsupported, "could not sample a forward instance");

    // exact polynomial solution, carried one order high so X' is exact mod t^n
    std::vector<TruncatedSeries> Xhi;
    for (unsigned i = 0; i < g; ++i) {
        TruncatedSeries x(ctx, n + 1);
        x.set_coeff(0, x0[i]);
        for (unsigned j = 1; j < n; ++j) x.set_coeff(j, rand_elem());
        Xhi.push_back(x);
    }
    RHS G{std::vector<TruncatedSeries>(g, TruncatedSeries(ctx, n))};
    for (unsigned i = 0; i < g; ++i) {
        TruncatedSeries F = eval_poly_at_series(ctx, fw.f, Xhi[i]);
        Elem branch = *residue_sqrt(ctx, F.coeff(0));
        Elem y0 = sqrt_with_branch(ctx, F.coeff(0), branch);
        fw.Y0.push_back(y0);
        TruncatedSeries sinv = ts_inv_sqrt(F.truncated(n), y0);       // 1/y_i
        TruncatedSeries xp = ts_derive(Xhi[i]);                       // truncation n
        TruncatedSeries pw = ts_one(ctx, n);
        for (unsigned k = 0; k < g; ++k) {
            G.G[k] = ts_add(G.G[k], ts_mul(ts_mul(pw, xp, n), sinv, n));
            if (k + 1 < g) pw = ts_mul(pw, Xhi[i].truncated(n), n);
        }
    }
    fw.G = G;
    for (auto& x : Xhi) fw.X.push_back(x.truncated(n));
    // exact product and initial data
    SeriesPoly U = sp_one(ctx, n);
    for (unsigned i = 0; i < g; ++i) {
        SeriesPoly lin(ctx, n, 1);
        lin[0] = ts_neg(fw.X[i]);
        lin[1] = ts_one(ctx, n);
        U = sp_mul(U, lin, n);
    }
    fw.U_exact = U;
    std::vector<Elem> y0s = fw.Y0;
    fw.U0 = zp_from_roots(ctx, x0);
    fw.V0 = zp_interpolate(ctx, x0, y0s);
    return fw;
}

SplitInstance split_of_forward(const ForwardInstance& fw) {
    SplitInstance s;
    s.f = fw.f;
    for (const auto& x : fw.X) s.X0.push_back(x.coeff(0));
    s.Y0 = fw.Y0;
    s.G = fw.G;
    return s;
}

SeriesPoly series_interpolate(const Ctx& ctx, const std::vector<TruncatedSeries>& xs,
                              const std::vector<TruncatedSeries>& ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw Error(Err::LengthMismatch, "interpolation data size mismatch");
    unsigned n = xs[0].n();
    size_t g = xs.size();
    SeriesPoly acc(ctx, n, g > 1 ? static_cast<unsigned>(g) - 1 : 0);
    for (size_t i = 0; i < g; ++i) {
        SeriesPoly basis = sp_one(ctx, n);
        TruncatedSeries denom = ts_one(ctx, n);
        for (size_t j = 0; j < g; ++j) {
            if (j == i) continue;
            SeriesPoly lin(ctx, n, 1);
            lin[0] = ts_neg(xs[j]);
            lin[1] = ts_one(ctx, n);
            basis = sp_mul(basis, lin, n);
            denom = ts_mul(denom, ts_sub(xs[i], xs[j]), n);
        }
        if (!is_unit(ctx, denom.coeff(0)))
            throw Error(Err::CollidingRoots, "interpolation nodes collide mod p");
        TruncatedSeries wgt = ts_mul(ys[i], ts_inv(denom), n);
        acc = sp_add(acc, sp_scale(basis, wgt));
    }
    return acc;
}

MumfordState state_from_coordinates(const Ctx& ctx, const ZPoly& f,
                                    const std::vector<TruncatedSeries>& x,
                                    const std::vector<Elem>& y0, unsigned m) {
    unsigned g = static_cast<unsigned>(x.size());
    std::vector<TruncatedSeries> xt, yt;
    for (unsigned i = 0; i < g; ++i) {
        TruncatedSeries xi = x[i].extended(m);
        TruncatedSeries F = eval_poly_at_series(ctx, f, xi);
        TruncatedSeries yi = ts_mul(F, ts_inv_sqrt(F, y0[i]), m);
        xt.push_back(xi);
        yt.push_back(yi);
    }
    SeriesPoly U = sp_one(ctx, m);
    for (unsigned i = 0; i < g; ++i) {
        SeriesPoly lin(ctx, m, 1);
        lin[0] = ts_neg(xt[i]);
        lin[1] = ts_one(ctx, m);
        U = sp_mul(U, lin, m);
    }
    SeriesPoly V = series_interpolate(ctx, xt, yt);
    while (V.size() < g) V.push_back(TruncatedSeries(ctx, m));
    QuotRing R = make_quot_ring(U);
    SeriesPoly W = qr_inv(R, V);
    return MumfordState{U, V, W, m};
}

/* ----------------------------- Cantor ------------------------------ */

ReducedDivisor cantor_identity(const Ctx& ctx) { return {zp_one(ctx), ZPoly{}}; }

ReducedDivisor divisor_of_point(const Ctx& ctx, const Elem& x, const Elem& y) {
    ZPoly a;
    a.c = {neg(ctx, x), elem_one(ctx)};
    return {a, zp_const(ctx, y)};
}

bool divisor_equal(const ReducedDivisor& A, const ReducedDivisor& B) {
    return zp_equal(A.a, B.a) && zp_equal(A.b, B.b);
}

bool divisor_is_reduced(const Ctx& ctx, const CurveData& curve, const ReducedDivisor& D) {
    if (D.a.is_zero() || !zp_is_monic(ctx, D.a)) return false;
    if (D.a.deg() > static_cast<int>(curve.g)) return false;
    if (!D.b.is_zero() && D.b.deg() >= D.a.deg()) return false;
    ZPoly rem =
        zp_divrem(ctx, zp_sub(ctx, curve.f, zp_mul(ctx, D.b, D.b)), D.a).second;
    return rem.is_zero();
}

ReducedDivisor cantor_neg(const Ctx& ctx, const ReducedDivisor& D) {
    return {D.a, zp_neg(ctx, D.b)};
}

namespace {

ZPoly zp_divexact(const Ctx& ctx, const ZPoly& a, const ZPoly& b) {
    auto [q, r] = zp_divrem(ctx, a, b);
    if (!r.is_zero())
        throw Error(Err::DegenerateDivisor, "inexact division in the Cantor chain");
    return q;
}

} // namespace

ReducedDivisor cantor_add(const Ctx& ctx, const CurveData& curve, const ReducedDivisor& D1,
                          const ReducedDivisor& D2) {
    // composition (Cantor): d = s1 a1 + s2 a2 + s3 (b1 + b2)
    auto [d1, e1, e2] = zp_xgcd(ctx, D1.a, D2.a);
    ZPoly s1, s2, s3, d;
    ZPoly bsum = zp_add(ctx, D1.b, D2.b);
    if (d1.deg() == 0) {
        d = d1;
        s1 = e1;
        s2 = e2;
        s3 = ZPoly{};
    } else {
        auto [d2, c1, c2] = zp_xgcd(ctx, d1, bsum);
        d = d2;
        s1 = zp_mul(ctx, c1, e1);
        s2 = zp_mul(ctx, c1, e2);
        s3 = c2;
    }
    ZPoly a = zp_divexact(ctx, zp_mul(ctx, D1.a, D2.a), zp_mul(ctx, d, d));
    ZPoly num = zp_add(ctx, zp_mul(ctx, zp_mul(ctx, s1, D1.a), D2.b),
                       zp_mul(ctx, zp_mul(ctx, s2, D2.a), D1.b));
    if (!s3.is_zero())
        num = zp_add(ctx, num,
                     zp_mul(ctx, s3, zp_add(ctx, zp_mul(ctx, D1.b, D2.b), curve.f)));
    ZPoly b = zp_divrem(ctx, zp_divexact(ctx, num, d), a).second;
    // reduction
    while (a.deg() > static_cast<int>(curve.g)) {
        ZPoly a2 = zp_divexact(ctx, zp_sub(ctx, curve.f, zp_mul(ctx, b, b)), a);
        a2 = zp_make_monic(ctx, a2);
        b = zp_divrem(ctx, zp_neg(ctx, b), a2).second;
        a = a2;
    }
    a = zp_make_monic(ctx, a);
    return {a, b};
}

ReducedDivisor cantor_mul(const Ctx& ctx, const CurveData& curve, const ReducedDivisor& D,
                          std::uint64_t ell) {
    ReducedDivisor acc = cantor_identity(ctx);
    ReducedDivisor base = D;
    while (ell) {
        if (ell & 1) acc = cantor_add(ctx, curve, acc, base);
        ell >>= 1;
        if (ell) base = cantor_add(ctx, curve, base, base);
    }
    return acc;
}

} // namespace hypiso
