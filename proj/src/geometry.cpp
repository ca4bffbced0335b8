#include "geometry.hpp"

namespace hypiso {

namespace {

void check_smooth(const Ctx& ctx, const ZPoly& f) {
    if (f.is_zero() || f.deg() < 3 || f.deg() % 2 == 0)
        throw Error(Err::Unsupported, "curve model needs deg f = 2g+1 >= 3");
    if (!is_unit(ctx, f.c.back()))
        throw Error(Err::SingularReduction, "leading coefficient of f vanishes mod p");
    Ctx rctx = ctx.residue();
    ZPoly fbar = zp_reduce_mod_p(ctx, f, 1);
    ZPoly g = zp_gcd(rctx, fbar, zp_derivative(rctx, fbar));
    if (g.deg() != 0)
        throw Error(Err::SingularReduction, "f is not squarefree over the residue field");
}

} // namespace

CurveData lift_curve(const Ctx& ctx, const ZPoly& f_bar) {
    ZPoly f;
    for (const auto& e : f_bar.c) {
        Elem x = elem_zero(ctx);
        for (unsigned i = 0; i < ctx.d() && i < e.c.size(); ++i) x.c[i] = e.c[i] % ctx.p();
        f.c.push_back(std::move(x));
    }
    zp_trim(f);
    return make_curve(ctx, f);
}

CurveData make_curve(const Ctx& ctx, const ZPoly& f) {
    check_smooth(ctx, f);
    return CurveData{f, static_cast<unsigned>((f.deg() - 1) / 2), &ctx};
}

std::pair<TruncatedSeries, TruncatedSeries> local_expansion(const CurveData& curve,
                                                            const CurvePoint& Q, unsigned n) {
    const Ctx& ctx = *curve.ctx;
    if (!is_unit(ctx, Q.v0))
        throw Error(Err::WeierstrassPoint, "expansion center has v0 = 0 mod p");
    TruncatedSeries u = ts_const(ctx, n, Q.u0);
    if (n > 1) u.set_coeff(1, elem_one(ctx));
    // F = f(u0 + t), then v = F * (1/sqrt(F)) on the v0 branch
    ZPoly shifted = zp_shift(ctx, curve.f, Q.u0);
    TruncatedSeries F(ctx, n);
    for (size_t i = 0; i < shifted.c.size() && i < n; ++i)
        F.set_coeff(static_cast<unsigned>(i), shifted.c[i]);
    if (F.coeff(0) != mul(ctx, Q.v0, Q.v0))
        throw Error(Err::BadInitialData, "v0^2 != f(u0)");
    TruncatedSeries s = ts_inv_sqrt(F, Q.v0);
    TruncatedSeries v = ts_mul(F, s, n);
    return {u, v};
}

namespace {

std::vector<TruncatedSeries> differential_basis(const CurveData& curve, const CurvePoint& Q,
                                                unsigned n) {
    const Ctx& ctx = *curve.ctx;
    auto [u, v] = local_expansion(curve, Q, n);
    TruncatedSeries vinv = ts_inv(v);
    std::vector<TruncatedSeries> rows;
    rows.reserve(curve.g);
    TruncatedSeries upow = ts_one(ctx, n);
    for (unsigned i = 0; i < curve.g; ++i) {
        rows.push_back(ts_mul(upow, vinv, n));  // u^{i} * u' / v with u' = 1
        if (i + 1 < curve.g) upow = ts_mul(upow, u, n);
    }
    return rows;
}

} // namespace

RHS build_G_mult_ell(const CurveData& curve, const CurvePoint& Q, std::uint64_t ell,
                     unsigned n) {
    const Ctx& ctx = *curve.ctx;
    if (ell == 0) return RHS{std::vector<TruncatedSeries>(curve.g, TruncatedSeries(ctx, n))};
    if (ell % ctx.p() == 0)
        throw Error(Err::Unsupported, "ell must be coprime to p");
    auto rows = differential_basis(curve, Q, n);
    Elem le = elem_from_int(ctx, static_cast<std::int64_t>(ell % ctx.pM()));
    RHS G;
    for (auto& r : rows) G.G.push_back(ts_scale(r, le));
    return G;
}

RHS build_G_matrix(const CurveData& curve, const CurvePoint& Q,
                   const std::vector<std::vector<Elem>>& Mmat, unsigned n) {
    const Ctx& ctx = *curve.ctx;
    unsigned g = curve.g;
    if (Mmat.size() != g)
        throw Error(Err::LengthMismatch, "action matrix must be g x g");
    for (const auto& row : Mmat)
        if (row.size() != g) throw Error(Err::LengthMismatch, "action matrix must be g x g");
    auto rows = differential_basis(curve, Q, n);
    RHS G;
    for (unsigned k = 0; k < g; ++k) {
        TruncatedSeries acc(ctx, n);
        for (unsigned j = 0; j < g; ++j)
            acc = ts_add(acc, ts_scale(rows[j], Mmat[k][j]));
        G.G.push_back(acc);
    }
    return G;
}

std::pair<ZPoly, ZPoly> mumford_from_points(const Ctx& target, const Ctx& ext,
                                            const std::vector<std::pair<Elem, Elem>>& pts) {
    if (target.p() != ext.p() || target.M() != ext.M())
        throw Error(Err::ContextMismatch, "point context must share p and M with the target");
    std::vector<Elem> xs, ys;
    for (const auto& [x, y] : pts) {
        xs.push_back(x);
        ys.push_back(y);
        if (!is_unit(ext, y))
            throw Error(Err::WeierstrassImage, "image point with y = 0 mod p");
    }
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j)
            if (!is_unit(ext, sub(ext, xs[i], xs[j])))
                throw Error(Err::CollidingRoots, "x-coordinates collide mod p");
    ZPoly U0 = zp_from_roots(ext, xs);
    ZPoly V0 = zp_interpolate(ext, xs, ys);
    if (target.compatible(ext)) return {U0, V0};
    if (target.d() != 1)
        throw Error(Err::Unsupported, "descent target must be the degree-1 base ring");
    auto descend = [&](const ZPoly& a) {
        ZPoly r;
        for (const auto& e : a.c) {
            for (size_t i = 1; i < e.c.size(); ++i)
                if (e.c[i] != 0)
                    throw Error(Err::NotRational,
                                "coefficients do not descend to the base ring");
            r.c.push_back(Elem(std::vector<std::uint64_t>{e.c[0]}));
        }
        zp_trim(r);
        return r;
    };
    return {descend(U0), descend(V0)};
}

} // namespace hypiso
