#include "zpoly.hpp"

#include <algorithm>

namespace hypiso {

void zp_trim(ZPoly& a) {
    while (!a.c.empty() && is_zero(a.c.back())) a.c.pop_back();
}

ZPoly zp_const(const Ctx& ctx, const Elem& e) {
    ZPoly r;
    if (!is_zero(e)) r.c.push_back(e);
    (void)ctx;
    return r;
}

ZPoly zp_one(const Ctx& ctx) { return zp_const(ctx, elem_one(ctx)); }

ZPoly zp_x(const Ctx& ctx) {
    ZPoly r;
    r.c = {elem_zero(ctx), elem_one(ctx)};
    return r;
}

ZPoly zp_add(const Ctx& ctx, const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Elem x = i < a.c.size() ? a.c[i] : elem_zero(ctx);
        if (i < b.c.size()) x = add(ctx, x, b.c[i]);
        r.c.push_back(std::move(x));
    }
    zp_trim(r);
    return r;
}

ZPoly zp_sub(const Ctx& ctx, const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Elem x = i < a.c.size() ? a.c[i] : elem_zero(ctx);
        if (i < b.c.size()) x = sub(ctx, x, b.c[i]);
        r.c.push_back(std::move(x));
    }
    zp_trim(r);
    return r;
}

ZPoly zp_mul(const Ctx& ctx, const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    ZPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, elem_zero(ctx));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = add(ctx, r.c[i + j], mul(ctx, a.c[i], b.c[j]));
    }
    zp_trim(r);
    return r;
}

ZPoly zp_scale(const Ctx& ctx, const ZPoly& a, const Elem& s) {
    ZPoly r = a;
    for (auto& x : r.c) x = mul(ctx, x, s);
    zp_trim(r);
    return r;
}

ZPoly zp_neg(const Ctx& ctx, const ZPoly& a) {
    ZPoly r = a;
    for (auto& x : r.c) x = neg(ctx, x);
    return r;
}

Elem zp_eval(const Ctx& ctx, const ZPoly& a, const Elem& x) {
    Elem r = elem_zero(ctx);
    for (size_t i = a.c.size(); i-- > 0;) r = add(ctx, mul(ctx, r, x), a.c[i]);
    return r;
}

ZPoly zp_derivative(const Ctx& ctx, const ZPoly& a) {
    ZPoly r;
    for (size_t i = 1; i < a.c.size(); ++i)
        r.c.push_back(mul(ctx, a.c[i], elem_from_int(ctx, static_cast<std::int64_t>(i))));
    zp_trim(r);
    return r;
}

ZPoly zp_reduce_mod_p(const Ctx& ctx, const ZPoly& a, unsigned digits) {
    ZPoly r = a;
    for (auto& x : r.c) x = reduce_mod(ctx, x, digits);
    zp_trim(r);
    return r;
}

bool zp_equal(const ZPoly& a, const ZPoly& b) { return a.c == b.c; }

bool zp_is_monic(const Ctx& ctx, const ZPoly& a) {
    return !a.c.empty() && a.c.back() == elem_one(ctx);
}

std::pair<ZPoly, ZPoly> zp_divrem(const Ctx& ctx, const ZPoly& a, const ZPoly& b) {
    if (b.is_zero()) throw Error(Err::NotInvertible, "division by zero polynomial");
    if (!is_unit(ctx, b.c.back()))
        throw Error(Err::DegenerateDivisor, "divisor leading coefficient is not a unit");
    Elem lci = inv(ctx, b.c.back());
    ZPoly r = a, q;
    if (a.c.size() >= b.c.size()) q.c.assign(a.c.size() - b.c.size() + 1, elem_zero(ctx));
    while (r.c.size() >= b.c.size() && !r.is_zero()) {
        size_t off = r.c.size() - b.c.size();
        Elem t = mul(ctx, r.c.back(), lci);
        q.c[off] = t;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[off + j] = sub(ctx, r.c[off + j], mul(ctx, t, b.c[j]));
        zp_trim(r);
        if (r.c.size() <= off) break;
    }
    zp_trim(q);
    zp_trim(r);
    return {q, r};
}

ZPoly zp_make_monic(const Ctx& ctx, const ZPoly& a) {
    if (a.is_zero()) return a;
    if (!is_unit(ctx, a.c.back()))
        throw Error(Err::DegenerateDivisor, "leading coefficient is not a unit");
    return zp_scale(ctx, a, inv(ctx, a.c.back()));
}

ZPoly zp_gcd(const Ctx& ctx, ZPoly a, ZPoly b) {
    zp_trim(a);
    zp_trim(b);
    while (!b.is_zero()) {
        auto [q, r] = zp_divrem(ctx, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a = zp_make_monic(ctx, a);
    return a;
}

std::tuple<ZPoly, ZPoly, ZPoly> zp_xgcd(const Ctx& ctx, const ZPoly& a, const ZPoly& b) {
    ZPoly r0 = a, r1 = b;
    ZPoly s0 = zp_one(ctx), s1{};
    ZPoly t0{}, t1 = zp_one(ctx);
    zp_trim(r0);
    zp_trim(r1);
    while (!r1.is_zero()) {
        auto [q, r] = zp_divrem(ctx, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        ZPoly s2 = zp_sub(ctx, s0, zp_mul(ctx, q, s1));
        s0 = std::move(s1);
        s1 = std::move(s2);
        ZPoly t2 = zp_sub(ctx, t0, zp_mul(ctx, q, t1));
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Elem lci = inv(ctx, r0.c.back());
    return {zp_scale(ctx, r0, lci), zp_scale(ctx, s0, lci), zp_scale(ctx, t0, lci)};
}

ZPoly zp_from_roots(const Ctx& ctx, const std::vector<Elem>& xs) {
    ZPoly r = zp_one(ctx);
    for (const auto& x : xs) {
        ZPoly lin;
        lin.c = {neg(ctx, x), elem_one(ctx)};
        r = zp_mul(ctx, r, lin);
    }
    return r;
}

ZPoly zp_interpolate(const Ctx& ctx, const std::vector<Elem>& xs,
                     const std::vector<Elem>& ys) {
    if (xs.size() != ys.size())
        throw Error(Err::LengthMismatch, "interpolation data size mismatch");
    ZPoly acc{};
    for (size_t i = 0; i < xs.size(); ++i) {
        ZPoly basis = zp_one(ctx);
        Elem denom = elem_one(ctx);
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            ZPoly lin;
            lin.c = {neg(ctx, xs[j]), elem_one(ctx)};
            basis = zp_mul(ctx, basis, lin);
            Elem diff = sub(ctx, xs[i], xs[j]);
            if (!is_unit(ctx, diff))
                throw Error(Err::CollidingRoots, "interpolation nodes collide mod p");
            denom = mul(ctx, denom, diff);
        }
        basis = zp_scale(ctx, basis, mul(ctx, ys[i], inv(ctx, denom)));
        acc = zp_add(ctx, acc, basis);
    }
    return acc;
}

ZPoly zp_shift(const Ctx& ctx, const ZPoly& a, const Elem& s) {
    // Horner: a(z+s) built from the top coefficient down
    ZPoly r{};
    ZPoly zs;
    zs.c = {s, elem_one(ctx)};
    for (size_t i = a.c.size(); i-- > 0;)
        r = zp_add(ctx, zp_mul(ctx, r, zs), zp_const(ctx, a.c[i]));
    return r;
}

} // namespace hypiso
