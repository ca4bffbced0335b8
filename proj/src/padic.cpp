#include "padic.hpp"

#include <algorithm>
#include <cassert>

namespace hypiso {

const char* err_name(Err e) {
    switch (e) {
        case Err::ContextMismatch: return "ContextMismatch";
        case Err::NotUnit: return "NotUnit";
        case Err::NoSquareRoot: return "NoSquareRoot";
        case Err::BadBranch: return "BadBranch";
        case Err::NonIntegral: return "NonIntegral";
        case Err::NonIntegralIntegral: return "NonIntegralIntegral";
        case Err::NotInvertible: return "NotInvertible";
        case Err::BadInit: return "BadInit";
        case Err::NotSeparable: return "NotSeparable";
        case Err::BadInitialData: return "BadInitialData";
        case Err::WeierstrassImage: return "WeierstrassImage";
        case Err::WeierstrassPoint: return "WeierstrassPoint";
        case Err::SingularReduction: return "SingularReduction";
        case Err::CollidingRoots: return "CollidingRoots";
        case Err::NotRational: return "NotRational";
        case Err::NoSolution: return "NoSolution";
        case Err::PoleAtPoint: return "PoleAtPoint";
        case Err::SingularH: return "SingularH";
        case Err::DegenerateDivisor: return "DegenerateDivisor";
        case Err::LengthMismatch: return "LengthMismatch";
        case Err::SchemaError: return "SchemaError";
        case Err::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

std::uint64_t& mul_op_counter() {
    thread_local std::uint64_t n = 0;
    return n;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((u128)a * b % m);
}

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic for n < 2^64 with this base set
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// extended gcd on signed 128-bit to invert units mod m (m < 2^63)
u64 invmod_u64(u64 a, u64 m) {
    using i128 = __int128;
    i128 r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        i128 q = r0 / r1;
        i128 r2 = r0 - q * r1;
        i128 s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw Error(Err::NotUnit, "element not invertible mod p^M");
    i128 s = s0 % (i128)m;
    if (s < 0) s += m;
    return static_cast<u64>(s);
}

/* ---- residue-field polynomial helpers (coefficients mod p) ----
 * Used for modulus validation and extension-element inversion.
 * Vectors hold coefficients low-degree first, no trailing zeros. */

void fp_trim(std::vector<u64>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<u64> fp_mulmod(const std::vector<u64>& a, const std::vector<u64>& b,
                           const std::vector<u64>& f, u64 p) {
    // f monic given by full coefficient list (degree = f.size()-1)
    if (a.empty() || b.empty()) return {};
    std::vector<u64> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + (u128)a[i] * b[j]) % p;
    size_t d = f.size() - 1;
    for (size_t i = c.size(); i-- > d;) {
        u64 t = c[i];
        if (!t) continue;
        c[i] = 0;
        for (size_t j = 0; j < d; ++j) {
            u64 s = mulmod_u64(t, f[j], p);
            c[i - d + j] = (c[i - d + j] + p - s) % p;
        }
    }
    c.resize(d);
    fp_trim(c);
    return c;
}

std::vector<u64> fp_powmod(std::vector<u64> a, u128 e, const std::vector<u64>& f, u64 p) {
    std::vector<u64> r{1};
    while (e) {
        if (e & 1) r = fp_mulmod(r, a, f, p);
        a = fp_mulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

std::vector<u64> fp_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // a mod b
        u64 lc_inv = invmod_u64(b.back(), p);
        while (a.size() >= b.size()) {
            u64 q = mulmod_u64(a.back(), lc_inv, p);
            size_t off = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) {
                u64 s = mulmod_u64(q, b[j], p);
                a[off + j] = (a[off + j] + p - s) % p;
            }
            fp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

// extended gcd over F_p[x]; returns (g, u) with u*a = g mod b, g monic
std::pair<std::vector<u64>, std::vector<u64>> fp_xgcd_mod(std::vector<u64> a,
                                                          const std::vector<u64>& b, u64 p) {
    fp_trim(a);
    std::vector<u64> r0 = b, r1 = a;
    std::vector<u64> s0{}, s1{1};
    auto submul = [&](std::vector<u64>& x, const std::vector<u64>& y, u64 q, size_t off) {
        if (x.size() < y.size() + off) x.resize(y.size() + off, 0);
        for (size_t j = 0; j < y.size(); ++j) {
            u64 s = mulmod_u64(q, y[j], p);
            x[off + j] = (x[off + j] + p - s) % p;
        }
        fp_trim(x);
    };
    while (!r1.empty()) {
        u64 lc_inv = invmod_u64(r1.back(), p);
        while (r0.size() >= r1.size() && !r0.empty()) {
            u64 q = mulmod_u64(r0.back(), lc_inv, p);
            size_t off = r0.size() - r1.size();
            submul(r0, r1, q, off);
            submul(s0, s1, q, off);
            if (r0.size() < r1.size()) break;
        }
        std::swap(r0, r1);
        std::swap(s0, s1);
    }
    if (r0.empty()) return {r0, s0};
    u64 lead_inv = invmod_u64(r0.back(), p);
    for (auto& x : r0) x = mulmod_u64(x, lead_inv, p);
    for (auto& x : s0) x = mulmod_u64(x, lead_inv, p);
    return {r0, s0};
}

bool fp_irreducible(const std::vector<u64>& f, u64 p) {
    size_t d = f.size() - 1;
    if (d == 1) return true;
    // x^(p^d) == x mod f, and gcd(x^(p^(d/q)) - x, f) = 1 for prime q | d
    std::vector<u64> x{0, 1};
    u128 pd = 1;
    for (size_t i = 0; i < d; ++i) pd *= p;
    auto xq = fp_powmod(x, pd, f, p);
    auto diff = xq;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    fp_trim(diff);
    if (!diff.empty()) return false;
    for (size_t q = 2; q <= d; ++q) {
        if (d % q != 0) continue;
        bool prime_q = true;
        for (size_t r = 2; r * r <= q; ++r)
            if (q % r == 0) prime_q = false;
        if (!prime_q) continue;
        u128 pe = 1;
        for (size_t i = 0; i < d / q; ++i) pe *= p;
        auto y = fp_powmod(x, pe, f, p);
        if (y.size() < 2) y.resize(2, 0);
        y[1] = (y[1] + p - 1) % p;
        fp_trim(y);
        auto g = fp_gcd(y, f, p);
        if (g.size() != 1) return false;
    }
    return true;
}

} // namespace

Ctx::Ctx(u64 p, unsigned M, unsigned d, std::vector<u64> modulus_tail)
    : p_(p), M_(M), d_(d), mod_(std::move(modulus_tail)) {
    if (p < 3 || (p & 1) == 0) throw Error(Err::Unsupported, "p must be an odd prime");
    if (!is_prime_u64(p)) throw Error(Err::Unsupported, "p must be prime");
    if (M < 1) throw Error(Err::Unsupported, "M must be >= 1");
    if (d < 1) throw Error(Err::Unsupported, "d must be >= 1");
    ppow_.assign(M + 1, 1);
    for (unsigned i = 1; i <= M; ++i) {
        if (ppow_[i - 1] > (u64(1) << 62) / p)
            throw Error(Err::Unsupported, "p^M exceeds 2^63; reduce M");
        ppow_[i] = ppow_[i - 1] * p;
    }
    pM_ = ppow_[M];
    r64_ = static_cast<u64>(((u128)1 << 64) % pM_);
    if (d == 1) {
        if (!mod_.empty())
            throw Error(Err::Unsupported, "modulus given for degree-1 context");
    } else {
        if (mod_.size() != d)
            throw Error(Err::Unsupported, "modulus must list the d low coefficients");
        for (auto& c : mod_) c %= pM_;
        std::vector<u64> fbar(d + 1);
        for (unsigned i = 0; i < d; ++i) fbar[i] = mod_[i] % p;
        fbar[d] = 1;
        if (!fp_irreducible(fbar, p))
            throw Error(Err::Unsupported, "modulus is reducible over the residue field");
    }
}

u64 Ctx::p_pow(unsigned e) const {
    if (e > M_) throw Error(Err::Unsupported, "p_pow exponent exceeds M");
    return ppow_[e];
}

bool Ctx::compatible(const Ctx& o) const {
    return p_ == o.p_ && M_ == o.M_ && d_ == o.d_ && mod_ == o.mod_;
}

Ctx Ctx::residue() const {
    if (d_ == 1) return Ctx(p_, 1);
    std::vector<u64> m(mod_);
    for (auto& c : m) c %= p_;
    return Ctx(p_, 1, d_, std::move(m));
}

std::optional<u64> Ctx::residue_card() const {
    u128 q = 1;
    for (unsigned i = 0; i < d_; ++i) {
        q *= p_;
        if (q >= ((u128)1 << 63)) return std::nullopt;
    }
    return static_cast<u64>(q);
}

u64 Ctx::add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= pM_ ? s - pM_ : s;
}
u64 Ctx::sub(u64 a, u64 b) const { return a >= b ? a - b : a + pM_ - b; }
u64 Ctx::mul(u64 a, u64 b) const {
    ++mul_op_counter();
    return mulmod_u64(a, b, pM_);
}
u64 Ctx::pow(u64 a, u64 e) const { return powmod_u64(a, e, pM_); }
u64 Ctx::inv_scalar(u64 a) const {
    if (a % p_ == 0) throw Error(Err::NotUnit, "scalar divisible by p");
    return invmod_u64(a, pM_);
}

Elem elem_zero(const Ctx& ctx) { return Elem(std::vector<u64>(ctx.d(), 0)); }
Elem elem_one(const Ctx& ctx) {
    Elem e = elem_zero(ctx);
    e.c[0] = 1 % ctx.pM();
    return e;
}
Elem elem_from_int(const Ctx& ctx, std::int64_t v) {
    Elem e = elem_zero(ctx);
    std::int64_t m = static_cast<std::int64_t>(ctx.pM());
    std::int64_t r = v % m;
    if (r < 0) r += m;
    e.c[0] = static_cast<u64>(r);
    return e;
}

u64 scalar_from_decimal(const Ctx& ctx, const std::string& s) {
    size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = (s[i] == '-');
        ++i;
    }
    if (i == s.size()) throw Error(Err::SchemaError, "empty integer literal");
    u64 r = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw Error(Err::SchemaError, "bad digit in integer literal: " + s);
        r = static_cast<u64>(((u128)r * 10 + (s[i] - '0')) % ctx.pM());
    }
    if (negative && r != 0) r = ctx.pM() - r;
    return r;
}

Elem elem_from_decimal(const Ctx& ctx, const std::string& s) {
    Elem e = elem_zero(ctx);
    e.c[0] = scalar_from_decimal(ctx, s);
    return e;
}

std::vector<std::string> elem_to_decimal(const Ctx& ctx, const Elem& a) {
    std::vector<std::string> out;
    out.reserve(ctx.d());
    for (unsigned i = 0; i < ctx.d(); ++i) out.push_back(std::to_string(a.c[i]));
    return out;
}

static void check_elem(const Ctx& ctx, const Elem& a, const char* who) {
    if (a.c.size() != ctx.d())
        throw Error(Err::ContextMismatch, std::string(who) + ": element has wrong degree");
}

Elem add(const Ctx& ctx, const Elem& a, const Elem& b) {
    check_elem(ctx, a, "add");
    check_elem(ctx, b, "add");
    Elem r = a;
    for (unsigned i = 0; i < ctx.d(); ++i) r.c[i] = ctx.add(r.c[i], b.c[i]);
    return r;
}

Elem sub(const Ctx& ctx, const Elem& a, const Elem& b) {
    check_elem(ctx, a, "sub");
    check_elem(ctx, b, "sub");
    Elem r = a;
    for (unsigned i = 0; i < ctx.d(); ++i) r.c[i] = ctx.sub(r.c[i], b.c[i]);
    return r;
}

Elem neg(const Ctx& ctx, const Elem& a) {
    check_elem(ctx, a, "neg");
    Elem r = a;
    for (auto& x : r.c) x = x ? ctx.pM() - x : 0;
    return r;
}

Elem mul(const Ctx& ctx, const Elem& a, const Elem& b) {
    check_elem(ctx, a, "mul");
    check_elem(ctx, b, "mul");
    unsigned d = ctx.d();
    if (d == 1) {
        Elem r = a;
        r.c[0] = ctx.mul(a.c[0], b.c[0]);
        return r;
    }
    std::vector<u64> t(2 * d - 1, 0);
    for (unsigned i = 0; i < d; ++i) {
        if (!a.c[i]) continue;
        for (unsigned j = 0; j < d; ++j)
            t[i + j] = ctx.add(t[i + j], ctx.mul(a.c[i], b.c[j]));
    }
    const auto& m = ctx.modulus_tail();
    for (unsigned i = 2 * d - 2; i >= d; --i) {
        u64 c = t[i];
        if (c) {
            t[i] = 0;
            for (unsigned j = 0; j < d; ++j)
                t[i - d + j] = ctx.sub(t[i - d + j], ctx.mul(c, m[j]));
        }
        if (i == d) break;
    }
    t.resize(d);
    return Elem(std::move(t));
}

Elem arith(const Ctx& ctx, const Elem& a, const Elem& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return add(ctx, a, b);
        case ArithOp::Sub: return sub(ctx, a, b);
        case ArithOp::Mul: return mul(ctx, a, b);
    }
    throw Error(Err::Unsupported, "unknown arith op");
}

bool is_zero(const Elem& a) {
    return std::all_of(a.c.begin(), a.c.end(), [](u64 x) { return x == 0; });
}

bool is_unit(const Ctx& ctx, const Elem& a) {
    for (auto x : a.c)
        if (x % ctx.p() != 0) return true;
    return false;
}

Elem reduce_mod(const Ctx& ctx, const Elem& a, unsigned digits) {
    Elem r = a;
    u64 q = ctx.p_pow(std::min(digits, ctx.M()));
    for (auto& x : r.c) x %= q;
    return r;
}

Elem inv(const Ctx& ctx, const Elem& a) {
    check_elem(ctx, a, "inv");
    if (!is_unit(ctx, a)) throw Error(Err::NotUnit, "inverse of a non-unit");
    unsigned d = ctx.d();
    if (d == 1) {
        Elem r = a;
        r.c[0] = invmod_u64(a.c[0], ctx.pM());
        return r;
    }
    // residue-field inverse by extended gcd, then Hensel: x <- x(2 - ax)
    std::vector<u64> abar(d), fbar(d + 1);
    for (unsigned i = 0; i < d; ++i) abar[i] = a.c[i] % ctx.p();
    for (unsigned i = 0; i < d; ++i) fbar[i] = ctx.modulus_tail()[i] % ctx.p();
    fbar[d] = 1;
    auto [g, u] = fp_xgcd_mod(abar, fbar, ctx.p());
    if (g.size() != 1) throw Error(Err::NotUnit, "inverse of a non-unit");
    u64 gi = invmod_u64(g[0], ctx.p());
    Elem x = elem_zero(ctx);
    for (size_t i = 0; i < u.size(); ++i) x.c[i] = mulmod_u64(u[i], gi, ctx.p());
    Elem two = elem_from_int(ctx, 2);
    unsigned prec = 1;
    while (prec < ctx.M()) {
        x = mul(ctx, x, sub(ctx, two, mul(ctx, a, x)));
        prec *= 2;
    }
    return x;
}

bool residue_is_square(const Ctx& ctx, const Elem& a) {
    if (!is_unit(ctx, a)) return false;
    auto qopt = ctx.residue_card();
    if (!qopt) throw Error(Err::Unsupported, "residue field too large for square test");
    u64 q = *qopt;
    Ctx rc = ctx.residue();
    Elem ar = reduce_mod(rc, Elem(a.c), 1);
    // a^((q-1)/2) == 1 exactly when a is a square
    Elem acc = elem_one(rc);
    Elem base = ar;
    u64 e = (q - 1) / 2;
    while (e) {
        if (e & 1) acc = mul(rc, acc, base);
        base = mul(rc, base, base);
        e >>= 1;
    }
    return acc == elem_one(rc);
}

std::optional<Elem> residue_sqrt(const Ctx& ctx, const Elem& a) {
    Ctx rc = ctx.residue();
    Elem ar = reduce_mod(rc, Elem(a.c), 1);
    if (is_zero(ar)) return elem_zero(rc);
    if (ctx.d() == 1) {
        u64 p = ctx.p(), v = ar.c[0];
        if (powmod_u64(v, (p - 1) / 2, p) != 1) return std::nullopt;
        // Tonelli-Shanks
        u64 qq = p - 1;
        unsigned s = 0;
        while ((qq & 1) == 0) { qq >>= 1; ++s; }
        u64 z = 2;
        while (powmod_u64(z, (p - 1) / 2, p) == 1) ++z;
        u64 m = s;
        u64 c = powmod_u64(z, qq, p);
        u64 t = powmod_u64(v, qq, p);
        u64 r = powmod_u64(v, (qq + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) { t2 = mulmod_u64(t2, t2, p); ++i; }
            u64 b = c;
            for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, p);
            m = i;
            c = mulmod_u64(b, b, p);
            t = mulmod_u64(t, c, p);
            r = mulmod_u64(r, b, p);
        }
        Elem out = elem_zero(rc);
        out.c[0] = r;
        return out;
    }
    auto qopt = ctx.residue_card();
    if (!qopt || *qopt > 4'000'000)
        throw Error(Err::Unsupported, "residue sqrt search only for small fields");
    u64 q = *qopt, p = ctx.p();
    // enumerate field elements by base-p digits
    Elem x = elem_zero(rc);
    for (u64 idx = 0; idx < q; ++idx) {
        u64 v = idx;
        for (unsigned i = 0; i < ctx.d(); ++i) {
            x.c[i] = v % p;
            v /= p;
        }
        if (mul(rc, x, x) == ar) return x;
    }
    return std::nullopt;
}

Elem sqrt_with_branch(const Ctx& ctx, const Elem& a, const Elem& branch) {
    check_elem(ctx, a, "sqrt");
    check_elem(ctx, branch, "sqrt");
    if (!is_unit(ctx, a)) throw Error(Err::NotUnit, "sqrt of a non-unit");
    Ctx rc = ctx.residue();
    Elem b1 = reduce_mod(rc, branch, 1), a1 = reduce_mod(rc, a, 1);
    if (mul(rc, b1, b1) != a1) {
        if (!residue_is_square(ctx, a))
            throw Error(Err::NoSquareRoot, "no square root in the residue field");
        throw Error(Err::BadBranch, "branch^2 != a in the residue field");
    }
    // Newton: x <- (x + a/x)/2, doubling p-adic precision (p odd)
    Elem x = branch;
    Elem half = inv(ctx, elem_from_int(ctx, 2));
    unsigned prec = 1;
    while (prec < ctx.M()) {
        x = mul(ctx, half, add(ctx, x, mul(ctx, a, inv(ctx, x))));
        prec *= 2;
    }
    return x;
}

std::pair<Elem, unsigned> divide_by_p_power(const Ctx& ctx, const Elem& a, unsigned e) {
    check_elem(ctx, a, "divide_by_p_power");
    if (e == 0) return {a, 0};
    if (e >= ctx.M())
        throw Error(Err::NonIntegral, "division by p^e with e >= M");
    u64 pe = ctx.p_pow(e);
    Elem r = a;
    for (auto& x : r.c) {
        if (x % pe != 0)
            throw Error(Err::NonIntegral, "stored value not divisible by p^" + std::to_string(e));
        x /= pe;
    }
    return {r, e};
}

} // namespace hypiso
