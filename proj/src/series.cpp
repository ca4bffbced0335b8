#include "series.hpp"

#include <gmp.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>

namespace hypiso {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

unsigned bitlen(u64 x) {
    unsigned b = 0;
    while (x) { ++b; x >>= 1; }
    return b;
}

const Ctx& common_ctx(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.ctx().compatible(b.ctx()))
        throw Error(Err::ContextMismatch, "series live in different rings");
    return a.ctx();
}

/* Flat view of a z-major coefficient block: zlen series of tlen
 * coefficients, each coefficient d words. */
struct BlockView {
    const u64* data;
    unsigned zlen, tlen, stride_t, d;  // stride_t = words per z-row / tlen slot adjust
    const u64* at(unsigned zi, unsigned ti) const {
        return data + (size_t(zi) * stride_t + size_t(ti)) * d;
    }
};

void extension_reduce(const Ctx& ctx, u64* acc /* 2d-1 residues */, u64* out /* d */) {
    unsigned d = ctx.d();
    if (d == 1) {
        out[0] = acc[0];
        return;
    }
    const auto& m = ctx.modulus_tail();
    for (unsigned i = 2 * d - 2; i >= d; --i) {
        u64 c = acc[i];
        if (c) {
            acc[i] = 0;
            for (unsigned j = 0; j < d; ++j)
                acc[i - d + j] = ctx.sub(acc[i - d + j], ctx.mul(c, m[j]));
        }
        if (i == d) break;
    }
    std::copy(acc, acc + d, out);
}

/* Schoolbook bivariate product, correct for any d. */
void mul_block_school(const Ctx& ctx, BlockView a, BlockView b, u64* out,
                      unsigned out_zlen, unsigned out_tlen) {
    unsigned d = ctx.d();
    std::vector<u64> acc(2 * d - 1);
    std::vector<u64> tmp(d);
    for (unsigned za = 0; za < a.zlen; ++za) {
        for (unsigned zb = 0; zb < b.zlen; ++zb) {
            unsigned zo = za + zb;
            if (zo >= out_zlen) continue;
            for (unsigned ta = 0; ta < a.tlen; ++ta) {
                for (unsigned tb = 0; tb < b.tlen; ++tb) {
                    unsigned to = ta + tb;
                    if (to >= out_tlen) continue;
                    const u64* pa = a.at(za, ta);
                    const u64* pb = b.at(zb, tb);
                    if (d == 1) {
                        if (!pa[0] || !pb[0]) continue;
                        u64* po = out + (size_t(zo) * out_tlen + to);
                        *po = ctx.add(*po, ctx.mul(pa[0], pb[0]));
                    } else {
                        std::fill(acc.begin(), acc.end(), 0);
                        for (unsigned i = 0; i < d; ++i) {
                            if (!pa[i]) continue;
                            for (unsigned j = 0; j < d; ++j)
                                acc[i + j] = ctx.add(acc[i + j], ctx.mul(pa[i], pb[j]));
                        }
                        extension_reduce(ctx, acc.data(), tmp.data());
                        u64* po = out + (size_t(zo) * out_tlen + to) * d;
                        for (unsigned i = 0; i < d; ++i) po[i] = ctx.add(po[i], tmp[i]);
                    }
                }
            }
        }
    }
}

/* Kronecker substitution: pack both operands into big integers with
 * byte-aligned slots, one GMP multiplication, unpack and reduce. */
void mul_block_kron(const Ctx& ctx, BlockView a, BlockView b, u64* out,
                    unsigned out_zlen, unsigned out_tlen) {
    unsigned d = ctx.d();
    unsigned t_span = a.tlen + b.tlen;
    unsigned w_span = 2 * d - 1;
    u64 terms = u64(std::min(a.zlen, b.zlen)) * std::min(a.tlen, b.tlen) * d;
    unsigned slot_bits = 2 * bitlen(ctx.pM() - 1) + bitlen(terms);
    unsigned slot_bytes = (slot_bits + 7) / 8;

    auto pack = [&](BlockView v, std::vector<unsigned char>& buf) {
        buf.assign(size_t(v.zlen) * t_span * w_span * slot_bytes + 1, 0);
        for (unsigned zi = 0; zi < v.zlen; ++zi)
            for (unsigned ti = 0; ti < v.tlen; ++ti) {
                const u64* e = v.at(zi, ti);
                size_t base = (size_t(zi) * t_span + ti) * w_span;
                for (unsigned wi = 0; wi < d; ++wi) {
                    u64 x = e[wi];
                    unsigned char* q = buf.data() + (base + wi) * slot_bytes;
                    for (unsigned k = 0; k < 8 && k < slot_bytes && x; ++k) {
                        q[k] = static_cast<unsigned char>(x & 0xff);
                        x >>= 8;
                    }
                }
            }
    };

    std::vector<unsigned char> ba, bb;
    pack(a, ba);
    pack(b, bb);
    kron_byte_counter() += ba.size() + bb.size();

    mpz_t za, zb;
    mpz_init(za);
    mpz_init(zb);
    mpz_import(za, ba.size(), -1, 1, 0, 0, ba.data());
    mpz_import(zb, bb.size(), -1, 1, 0, 0, bb.data());
    mpz_mul(za, za, zb);
    size_t prod_bytes = (mpz_sizeinbase(za, 2) + 7) / 8;
    std::vector<unsigned char> pb(prod_bytes + 8, 0);
    size_t written = 0;
    mpz_export(pb.data(), &written, -1, 1, 0, 0, za);
    mpz_clear(za);
    mpz_clear(zb);

    u64 r64 = ctx.r64();  // 2^64 mod p^M
    std::vector<u64> acc(w_span), red(d);
    for (unsigned zo = 0; zo < out_zlen; ++zo) {
        for (unsigned to = 0; to < out_tlen; ++to) {
            size_t base = (size_t(zo) * t_span + to) * w_span;
            for (unsigned wi = 0; wi < w_span; ++wi) {
                size_t off = (base + wi) * slot_bytes;
                u64 v = 0;
                if (off < pb.size()) {
                    // fold the slot bytes mod p^M, 8 bytes at a time
                    unsigned nb = slot_bytes;
                    size_t hi = off + nb;
                    while (hi > off) {
                        size_t lo = hi >= off + 8 ? hi - 8 : off;
                        u64 w = 0;
                        for (size_t k = lo; k < hi && k < pb.size(); ++k)
                            w |= u64(pb[k]) << (8 * (k - lo));
                        if (hi - lo == 8)
                            v = static_cast<u64>(((u128)v * r64 + w) % ctx.pM());
                        else {
                            u128 shift = (u128)1 << (8 * (hi - lo));
                            v = static_cast<u64>(((u128)v * (u64)(shift % ctx.pM()) + w) % ctx.pM());
                        }
                        hi = lo;
                    }
                }
                acc[wi] = v;
            }
            extension_reduce(ctx, acc.data(), red.data());
            std::copy(red.begin(), red.end(), out + (size_t(zo) * out_tlen + to) * d);
        }
    }
}

void mul_block(const Ctx& ctx, BlockView a, BlockView b, u64* out, unsigned out_zlen,
               unsigned out_tlen) {
    if (a.zlen == 0 || b.zlen == 0 || a.tlen == 0 || b.tlen == 0) return;
    u64 work = u64(a.zlen) * a.tlen * b.zlen * b.tlen * ctx.d() * ctx.d();
    if (work <= 4096)
        mul_block_school(ctx, a, b, out, out_zlen, out_tlen);
    else
        mul_block_kron(ctx, a, b, out, out_zlen, out_tlen);
}

} // namespace

std::uint64_t& kron_byte_counter() {
    thread_local std::uint64_t n = 0;
    return n;
}

/* ------------------------- TruncatedSeries ------------------------- */

TruncatedSeries::TruncatedSeries(const Ctx& ctx, unsigned n)
    : ctx_(&ctx), a_(size_t(n) * ctx.d(), 0), n_(n) {}

Elem TruncatedSeries::coeff(unsigned i) const {
    if (i >= n_) return elem_zero(*ctx_);
    Elem e = elem_zero(*ctx_);
    std::copy(a_.begin() + size_t(i) * ctx_->d(), a_.begin() + size_t(i + 1) * ctx_->d(),
              e.c.begin());
    return e;
}

void TruncatedSeries::set_coeff(unsigned i, const Elem& e) {
    if (i >= n_) throw Error(Err::LengthMismatch, "coefficient index beyond truncation");
    if (e.c.size() != ctx_->d())
        throw Error(Err::ContextMismatch, "element has wrong degree");
    std::copy(e.c.begin(), e.c.end(), a_.begin() + size_t(i) * ctx_->d());
}

unsigned TruncatedSeries::valuation() const {
    unsigned d = ctx_->d();
    for (unsigned i = 0; i < n_; ++i)
        for (unsigned j = 0; j < d; ++j)
            if (a_[size_t(i) * d + j]) return i;
    return n_;
}

TruncatedSeries TruncatedSeries::truncated(unsigned n2) const {
    if (n2 >= n_) return *this;
    TruncatedSeries r(*ctx_, n2);
    std::copy(a_.begin(), a_.begin() + size_t(n2) * ctx_->d(), r.a_.begin());
    r.loss_ = loss_;
    return r;
}

TruncatedSeries TruncatedSeries::extended(unsigned n2) const {
    if (n2 <= n_) return truncated(n2);
    TruncatedSeries r(*ctx_, n2);
    std::copy(a_.begin(), a_.end(), r.a_.begin());
    r.loss_ = loss_;
    return r;
}

TruncatedSeries TruncatedSeries::reduced_mod(unsigned digits) const {
    TruncatedSeries r = *this;
    u64 q = ctx_->p_pow(std::min(digits, ctx_->M()));
    for (auto& x : r.a_) x %= q;
    return r;
}

bool TruncatedSeries::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](u64 x) { return x == 0; });
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const {
    if (n_ != o.n_ || a_ != o.a_) return false;
    if (ctx_ == o.ctx_) return true;
    return ctx_ && o.ctx_ && ctx_->compatible(*o.ctx_);
}

TruncatedSeries ts_const(const Ctx& ctx, unsigned n, const Elem& e) {
    TruncatedSeries r(ctx, n);
    if (n > 0) r.set_coeff(0, e);
    return r;
}

TruncatedSeries ts_one(const Ctx& ctx, unsigned n) { return ts_const(ctx, n, elem_one(ctx)); }

TruncatedSeries ts_add(const TruncatedSeries& a, const TruncatedSeries& b) {
    const Ctx& ctx = common_ctx(a, b);
    if (a.n() != b.n()) throw Error(Err::LengthMismatch, "series truncations differ");
    TruncatedSeries r = a;
    const u64* pb = b.raw();
    u64* pr = r.raw();
    size_t words = size_t(a.n()) * ctx.d();
    for (size_t i = 0; i < words; ++i) pr[i] = ctx.add(pr[i], pb[i]);
    r.bump_loss(b.loss());
    return r;
}

TruncatedSeries ts_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    const Ctx& ctx = common_ctx(a, b);
    if (a.n() != b.n()) throw Error(Err::LengthMismatch, "series truncations differ");
    TruncatedSeries r = a;
    const u64* pb = b.raw();
    u64* pr = r.raw();
    size_t words = size_t(a.n()) * ctx.d();
    for (size_t i = 0; i < words; ++i) pr[i] = ctx.sub(pr[i], pb[i]);
    r.bump_loss(b.loss());
    return r;
}

TruncatedSeries ts_neg(const TruncatedSeries& a) {
    TruncatedSeries r = a;
    u64* pr = r.raw();
    size_t words = size_t(a.n()) * a.ctx().d();
    for (size_t i = 0; i < words; ++i) pr[i] = pr[i] ? a.ctx().pM() - pr[i] : 0;
    return r;
}

TruncatedSeries ts_mul(const TruncatedSeries& a, const TruncatedSeries& b, unsigned nout) {
    const Ctx& ctx = common_ctx(a, b);
    if (nout == 0) nout = std::min(a.n(), b.n());
    TruncatedSeries r(ctx, nout);
    unsigned ta = std::min(a.n(), nout), tb = std::min(b.n(), nout);
    BlockView va{a.raw(), 1, ta, ta, ctx.d()};
    BlockView vb{b.raw(), 1, tb, tb, ctx.d()};
    mul_block(ctx, va, vb, r.raw(), 1, nout);
    r.set_loss(std::max(a.loss(), b.loss()));
    return r;
}

TruncatedSeries ts_scale(const TruncatedSeries& a, const Elem& s) {
    const Ctx& ctx = a.ctx();
    TruncatedSeries r(ctx, a.n());
    for (unsigned i = 0; i < a.n(); ++i) r.set_coeff(i, mul(ctx, a.coeff(i), s));
    r.set_loss(a.loss());
    return r;
}

TruncatedSeries ts_arith(const TruncatedSeries& a, const TruncatedSeries& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return ts_add(a, b);
        case ArithOp::Sub: return ts_sub(a, b);
        case ArithOp::Mul: return ts_mul(a, b);
    }
    throw Error(Err::Unsupported, "unknown arith op");
}

TruncatedSeries ts_integrate(const TruncatedSeries& a) {
    const Ctx& ctx = a.ctx();
    TruncatedSeries r(ctx, a.n() + 1);
    unsigned worst = 0;
    for (unsigned i = 0; i < a.n(); ++i) {
        u64 k = i + 1;
        unsigned e = 0;
        while (k % ctx.p() == 0) { k /= ctx.p(); ++e; }
        worst = std::max(worst, e);
        Elem c = a.coeff(i);
        if (e > 0) {
            try {
                c = divide_by_p_power(ctx, c, e).first;
            } catch (const Error& err) {
                if (err.code() == Err::NonIntegral)
                    throw Error(Err::NonIntegralIntegral,
                                "coefficient of t^" + std::to_string(i) +
                                    " not divisible by p^" + std::to_string(e));
                throw;
            }
        }
        if (k != 1) {
            Elem ik = elem_zero(ctx);
            ik.c[0] = ctx.inv_scalar(k);
            c = mul(ctx, c, ik);
        }
        r.set_coeff(i + 1, c);
    }
    r.set_loss(std::min<unsigned>(a.loss() + worst, ctx.M() - 1));
    return r;
}

TruncatedSeries ts_derive(const TruncatedSeries& a) {
    const Ctx& ctx = a.ctx();
    unsigned n2 = a.n() > 0 ? a.n() - 1 : 0;
    TruncatedSeries r(ctx, n2);
    for (unsigned i = 0; i < n2; ++i) {
        Elem c = a.coeff(i + 1);
        Elem k = elem_from_int(ctx, static_cast<std::int64_t>(i + 1));
        r.set_coeff(i, mul(ctx, c, k));
    }
    r.set_loss(a.loss());
    return r;
}

TruncatedSeries ts_inv(const TruncatedSeries& a) {
    const Ctx& ctx = a.ctx();
    Elem a0 = a.coeff(0);
    Elem x0 = inv(ctx, a0);  // NotUnit if constant term is not a unit
    TruncatedSeries x = ts_const(ctx, 1, x0);
    unsigned cur = 1;
    while (cur < a.n()) {
        unsigned nxt = std::min(2 * cur, a.n());
        x = x.extended(nxt);
        TruncatedSeries e = ts_sub(ts_const(ctx, nxt, elem_from_int(ctx, 2)),
                                   ts_mul(a.truncated(nxt), x, nxt));
        x = ts_mul(x, e, nxt);
        cur = nxt;
    }
    x.set_loss(a.loss());
    return x;
}

TruncatedSeries ts_inv_sqrt(const TruncatedSeries& F, const Elem& branch) {
    const Ctx& ctx = F.ctx();
    if (mul(ctx, branch, branch) != F.coeff(0))
        throw Error(Err::BadInit, "branch^2 != F(0)");
    Elem half = inv(ctx, elem_from_int(ctx, 2));
    TruncatedSeries s = ts_const(ctx, 1, inv(ctx, branch));
    unsigned cur = 1;
    while (cur < F.n()) {
        unsigned nxt = std::min(2 * cur, F.n());
        s = s.extended(nxt);
        TruncatedSeries s2 = ts_mul(s, s, nxt);
        TruncatedSeries e = ts_sub(ts_const(ctx, nxt, elem_from_int(ctx, 3)),
                                   ts_mul(F.truncated(nxt), s2, nxt));
        s = ts_scale(ts_mul(s, e, nxt), half);
        cur = nxt;
    }
    s.set_loss(F.loss());
    return s;
}

Elem ts_eval(const TruncatedSeries& a, const Elem& x) {
    const Ctx& ctx = a.ctx();
    Elem r = elem_zero(ctx);
    for (unsigned i = a.n(); i-- > 0;) r = add(ctx, mul(ctx, r, x), a.coeff(i));
    return r;
}

/* --------------------------- SeriesPoly ---------------------------- */

SeriesPoly::SeriesPoly(const Ctx& ctx, unsigned n, unsigned zdeg) {
    zc_.assign(zdeg + 1, TruncatedSeries(ctx, n));
}

unsigned SeriesPoly::n() const {
    if (zc_.empty()) throw Error(Err::LengthMismatch, "empty series polynomial");
    return zc_[0].n();
}

const Ctx& SeriesPoly::ctx() const {
    if (zc_.empty()) throw Error(Err::LengthMismatch, "empty series polynomial");
    return zc_[0].ctx();
}

unsigned SeriesPoly::loss() const {
    unsigned l = 0;
    for (const auto& s : zc_) l = std::max(l, s.loss());
    return l;
}

SeriesPoly SeriesPoly::truncated(unsigned n2) const {
    SeriesPoly r;
    for (const auto& s : zc_) r.push_back(s.truncated(n2));
    return r;
}

SeriesPoly SeriesPoly::extended(unsigned n2) const {
    SeriesPoly r;
    for (const auto& s : zc_) r.push_back(s.extended(n2));
    return r;
}

void SeriesPoly::trim() {
    while (zc_.size() > 1 && zc_.back().is_zero()) zc_.pop_back();
}

bool SeriesPoly::is_zero() const {
    return std::all_of(zc_.begin(), zc_.end(),
                       [](const TruncatedSeries& s) { return s.is_zero(); });
}

bool SeriesPoly::is_monic() const {
    if (zc_.empty()) return false;
    return zc_.back() == ts_one(ctx(), n());
}

ZPoly SeriesPoly::at_t0() const {
    ZPoly r;
    for (const auto& s : zc_) r.c.push_back(s.coeff(0));
    zp_trim(r);
    return r;
}

SeriesPoly SeriesPoly::reduced_mod(unsigned digits) const {
    SeriesPoly r;
    for (const auto& s : zc_) r.push_back(s.reduced_mod(digits));
    return r;
}

SeriesPoly sp_from_zpoly(const Ctx& ctx, const ZPoly& a, unsigned n) {
    SeriesPoly r(ctx, n, a.c.empty() ? 0 : a.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = ts_const(ctx, n, a.c[i]);
    return r;
}

SeriesPoly sp_one(const Ctx& ctx, unsigned n) {
    SeriesPoly r(ctx, n, 0);
    r[0] = ts_one(ctx, n);
    return r;
}

SeriesPoly sp_add(const SeriesPoly& a, const SeriesPoly& b) {
    SeriesPoly r;
    size_t m = std::max(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
        if (i >= a.size())
            r.push_back(b[i]);
        else if (i >= b.size())
            r.push_back(a[i]);
        else
            r.push_back(ts_add(a[i], b[i]));
    }
    return r;
}

SeriesPoly sp_sub(const SeriesPoly& a, const SeriesPoly& b) {
    SeriesPoly r;
    size_t m = std::max(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
        if (i >= a.size())
            r.push_back(ts_neg(b[i]));
        else if (i >= b.size())
            r.push_back(a[i]);
        else
            r.push_back(ts_sub(a[i], b[i]));
    }
    return r;
}

SeriesPoly sp_neg(const SeriesPoly& a) {
    SeriesPoly r;
    for (size_t i = 0; i < a.size(); ++i) r.push_back(ts_neg(a[i]));
    return r;
}

namespace {

SeriesPoly sp_low(const SeriesPoly& a, size_t k) {
    SeriesPoly r;
    for (size_t i = 0; i < k; ++i)
        r.push_back(i < a.size() ? a[i] : TruncatedSeries(a.ctx(), a.n()));
    return r;
}

// gather the flat z-major block of a SeriesPoly truncated to tlen
std::vector<u64> gather_block(const SeriesPoly& a, unsigned tlen) {
    unsigned d = a.ctx().d();
    std::vector<u64> buf(size_t(a.size()) * tlen * d, 0);
    for (size_t zi = 0; zi < a.size(); ++zi) {
        unsigned tcopy = std::min(tlen, a[zi].n());
        std::memcpy(buf.data() + zi * size_t(tlen) * d, a[zi].raw(),
                    size_t(tcopy) * d * sizeof(u64));
    }
    return buf;
}

SeriesPoly scatter_block(const Ctx& ctx, const std::vector<u64>& buf, unsigned zlen,
                         unsigned tlen, unsigned loss) {
    SeriesPoly r(ctx, tlen, zlen - 1);
    unsigned d = ctx.d();
    for (unsigned zi = 0; zi < zlen; ++zi) {
        TruncatedSeries s(ctx, tlen);
        std::memcpy(s.raw(), buf.data() + size_t(zi) * tlen * d, size_t(tlen) * d * sizeof(u64));
        s.set_loss(loss);
        r[zi] = s;
    }
    return r;
}

} // namespace

SeriesPoly sp_mul(const SeriesPoly& a, const SeriesPoly& b, unsigned nout) {
    const Ctx& ctx = a.ctx();
    if (!ctx.compatible(b.ctx()))
        throw Error(Err::ContextMismatch, "polynomials live in different rings");
    if (nout == 0) nout = std::min(a.n(), b.n());
    unsigned ta = std::min(a.n(), nout), tb = std::min(b.n(), nout);
    unsigned zlen = a.size() + b.size() - 1;
    std::vector<u64> ba = gather_block(a, ta), bb = gather_block(b, tb);
    std::vector<u64> out(size_t(zlen) * nout * ctx.d(), 0);
    BlockView va{ba.data(), (unsigned)a.size(), ta, ta, ctx.d()};
    BlockView vb{bb.data(), (unsigned)b.size(), tb, tb, ctx.d()};
    mul_block(ctx, va, vb, out.data(), zlen, nout);
    return scatter_block(ctx, out, zlen, nout, std::max(a.loss(), b.loss()));
}

SeriesPoly sp_mul_naive(const SeriesPoly& a, const SeriesPoly& b, unsigned nout) {
    const Ctx& ctx = a.ctx();
    if (nout == 0) nout = std::min(a.n(), b.n());
    SeriesPoly r(ctx, nout, a.size() + b.size() - 2);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = ts_add(r[i + j], ts_mul(a[i].truncated(std::min(nout, a[i].n())),
                                               b[j].truncated(std::min(nout, b[j].n())), nout));
    return r;
}

SeriesPoly sp_scale(const SeriesPoly& a, const TruncatedSeries& s) {
    SeriesPoly r;
    for (size_t i = 0; i < a.size(); ++i) r.push_back(ts_mul(a[i], s));
    return r;
}

SeriesPoly sp_deriv_z(const SeriesPoly& a) {
    const Ctx& ctx = a.ctx();
    if (a.size() <= 1) return SeriesPoly(ctx, a.n(), 0);
    SeriesPoly r;
    for (size_t i = 1; i < a.size(); ++i)
        r.push_back(ts_scale(a[i], elem_from_int(ctx, static_cast<std::int64_t>(i))));
    return r;
}

SeriesPoly sp_deriv_t(const SeriesPoly& a) {
    SeriesPoly r;
    for (size_t i = 0; i < a.size(); ++i) r.push_back(ts_derive(a[i]));
    return r;
}

SeriesPoly sp_reverse(const SeriesPoly& a, unsigned D) {
    SeriesPoly r;
    for (unsigned i = 0; i <= D; ++i) {
        unsigned j = D - i;
        r.push_back(j < a.size() ? a[j] : TruncatedSeries(a.ctx(), a.n()));
    }
    return r;
}

TruncatedSeries sp_eval_series(const SeriesPoly& a, const TruncatedSeries& x) {
    TruncatedSeries r(a.ctx(), x.n());
    for (size_t i = a.size(); i-- > 0;)
        r = ts_add(ts_mul(r, x, x.n()), a[i].extended(x.n()).truncated(x.n()));
    return r;
}

/* ---------------------------- QuotRing ----------------------------- */

QuotRing make_quot_ring(const SeriesPoly& U) {
    if (!U.is_monic())
        throw Error(Err::NotInvertible, "quotient modulus must be monic");
    QuotRing R;
    R.U = U;
    R.g = static_cast<unsigned>(U.deg());
    R.n = U.n();
    const Ctx& ctx = U.ctx();
    unsigned target = 2 * R.g;
    SeriesPoly revU = sp_reverse(U, R.g);
    SeriesPoly x = sp_one(ctx, R.n);
    unsigned cur = 1;
    while (cur < target) {
        unsigned nxt = std::min(2 * cur, target);
        SeriesPoly prod = sp_low(sp_mul(sp_low(revU, nxt), x, R.n), nxt);
        SeriesPoly two = sp_one(ctx, R.n);
        two[0] = ts_const(ctx, R.n, elem_from_int(ctx, 2));
        SeriesPoly e = sp_sub(sp_low(two, nxt), prod);
        x = sp_low(sp_mul(x, e, R.n), nxt);
        cur = nxt;
    }
    R.inv_revU = sp_low(x, target);
    return R;
}

SeriesPoly qr_reduce(const QuotRing& R, const SeriesPoly& x, unsigned nout) {
    if (nout == 0) nout = R.n;
    unsigned g = R.g;
    unsigned D = static_cast<unsigned>(x.size()) - 1;
    if (D < g) return sp_low(x.truncated(std::min(nout, x.n())).extended(nout), g);
    unsigned qlen = D - g + 1;
    SeriesPoly qrev =
        sp_low(sp_mul(sp_reverse(x, D), sp_low(R.inv_revU, qlen), nout), qlen);
    SeriesPoly q = sp_reverse(qrev, qlen - 1);
    SeriesPoly r = sp_sub(sp_low(x.truncated(nout).extended(nout), g),
                          sp_low(sp_mul(q, R.U, nout), g));
    return r;
}

SeriesPoly qr_mul(const QuotRing& R, const SeriesPoly& a, const SeriesPoly& b,
                  unsigned nout) {
    if (nout == 0) nout = R.n;
    return qr_reduce(R, sp_mul(a, b, nout), nout);
}

namespace {

ZPoly zp_to_residue(const Ctx& ctx, const Ctx& rctx, const ZPoly& a) {
    ZPoly r;
    for (const auto& e : a.c) {
        Elem x = e;
        for (auto& w : x.c) w %= ctx.p();
        r.c.push_back(std::move(x));
    }
    zp_trim(r);
    (void)rctx;
    return r;
}

// a^{-1} mod (U0, p^M), both plain polynomials; residue-field xgcd + p-Hensel
ZPoly zpoly_invert_mod(const Ctx& ctx, const ZPoly& a, const ZPoly& U0) {
    Ctx rctx = ctx.residue();
    ZPoly abar = zp_to_residue(ctx, rctx, a);
    ZPoly ubar = zp_to_residue(ctx, rctx, U0);
    auto [gbar, sbar, tbar] = zp_xgcd(rctx, abar, ubar);
    if (gbar.deg() != 0)
        throw Error(Err::NotInvertible, "not invertible modulo (U, p, t)");
    ZPoly x = sbar;  // already scaled so that s*a = 1 mod (U, p)
    // interpret residues as elements mod p^M and lift
    ZPoly two = zp_const(ctx, elem_from_int(ctx, 2));
    unsigned prec = 1;
    while (prec < ctx.M()) {
        ZPoly ax = zp_divrem(ctx, zp_mul(ctx, a, x), U0).second;
        x = zp_divrem(ctx, zp_mul(ctx, x, zp_sub(ctx, two, ax)), U0).second;
        prec *= 2;
    }
    return x;
}

SeriesPoly sp_from_zpoly_width(const Ctx& ctx, const ZPoly& a, unsigned n, unsigned width) {
    SeriesPoly r(ctx, n, width - 1);
    for (size_t i = 0; i < a.c.size() && i < width; ++i) r[i] = ts_const(ctx, n, a.c[i]);
    return r;
}

} // namespace

SeriesPoly qr_inv(const QuotRing& R, const SeriesPoly& a) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g, n = R.n;
    ZPoly a0 = a.at_t0();
    ZPoly U0 = R.U.at_t0();
    ZPoly x0 = zpoly_invert_mod(ctx, a0, U0);
    SeriesPoly x = sp_from_zpoly_width(ctx, x0, 1, g);
    unsigned cur = 1;
    while (cur < n) {
        unsigned nxt = std::min(2 * cur, n);
        SeriesPoly ax = qr_mul(R, a, x, nxt);
        SeriesPoly e(ctx, nxt, g - 1);
        e[0] = ts_const(ctx, nxt, elem_from_int(ctx, 2));
        e = sp_sub(e, ax);
        x = qr_mul(R, x, e, nxt);
        cur = nxt;
    }
    return sp_low(x.extended(n), g);
}

std::pair<SeriesPoly, SeriesPoly> inverse_sqrt_mod(const ZPoly& f, const QuotRing& R,
                                                   const SeriesPoly& W_init,
                                                   unsigned start_order) {
    const Ctx& ctx = R.ctx();
    unsigned n = R.n, g = R.g;
    SeriesPoly fred = qr_reduce(R, sp_from_zpoly(ctx, f, n));
    // the order-t^0 relation must hold exactly
    {
        ZPoly W0 = W_init.at_t0();
        ZPoly U0 = R.U.at_t0();
        ZPoly chk = zp_divrem(ctx, zp_mul(ctx, zp_mul(ctx, W0, W0), f), U0).second;
        if (!zp_equal(chk, zp_one(ctx)))
            throw Error(Err::BadInit, "W_init^2 * f != 1 at order t^0");
    }
    Elem half = inv(ctx, elem_from_int(ctx, 2));
    SeriesPoly W = sp_low(W_init.truncated(std::min(n, W_init.n())), g);
    unsigned cur = std::max(1u, start_order);
    while (cur < n) {
        unsigned nxt = std::min(2 * cur, n);
        SeriesPoly W2 = qr_mul(R, W, W, nxt);
        SeriesPoly e(ctx, nxt, g - 1);
        e[0] = ts_const(ctx, nxt, elem_from_int(ctx, 3));
        e = sp_sub(e, qr_mul(R, fred, W2, nxt));
        W = qr_mul(R, W, e, nxt);
        for (size_t i = 0; i < W.size(); ++i) W[i] = ts_scale(W[i], half);
        cur = nxt;
    }
    W = sp_low(W.extended(n), g);
    SeriesPoly V = qr_mul(R, fred, W, n);
    return {W, sp_low(V, g)};
}

std::vector<TruncatedSeries> newton_sums_from0(const QuotRing& R, unsigned count) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g;
    if (count + 1 > 2 * g && g > 0)
        throw Error(Err::LengthMismatch, "newton sums beyond 2g-1 not precomputed");
    SeriesPoly Up = sp_deriv_z(R.U);
    SeriesPoly S = sp_low(sp_mul(sp_reverse(Up, g - 1), sp_low(R.inv_revU, count + 1), R.n),
                          count + 1);
    std::vector<TruncatedSeries> out;
    out.reserve(count + 1);
    for (unsigned i = 0; i <= count; ++i)
        out.push_back(i < S.size() ? S[i] : TruncatedSeries(ctx, R.n));
    return out;
}

std::vector<TruncatedSeries> newton_sums(const QuotRing& R, unsigned count) {
    auto all = newton_sums_from0(R, count);
    return std::vector<TruncatedSeries>(all.begin() + 1, all.end());
}

std::vector<TruncatedSeries> deriv_sums(const QuotRing& R, unsigned count) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g;
    unsigned nm1 = R.n > 0 ? R.n - 1 : 0;
    SeriesPoly Ut = sp_low(sp_deriv_t(R.U), g);  // leading 1 differentiates away
    if (nm1 == 0) return std::vector<TruncatedSeries>(count, TruncatedSeries(ctx, 0));
    SeriesPoly S = sp_low(
        sp_mul(sp_reverse(Ut, g - 1), sp_low(R.inv_revU, count).truncated(nm1), nm1), count);
    std::vector<TruncatedSeries> out;
    out.reserve(count);
    for (unsigned i = 0; i < count; ++i)
        out.push_back(i < S.size() ? ts_neg(S[i]) : TruncatedSeries(ctx, nm1));
    return out;
}

std::vector<TruncatedSeries> hankel_apply(const std::vector<TruncatedSeries>& a,
                                          const std::vector<TruncatedSeries>& w,
                                          unsigned nout) {
    unsigned g = static_cast<unsigned>(w.size());
    if (a.size() != 2 * size_t(g) - 1)
        throw Error(Err::LengthMismatch, "hankel inputs must have lengths 2g-1 and g");
    const Ctx& ctx = a[0].ctx();
    if (nout == 0) nout = a[0].n();
    SeriesPoly A;
    for (const auto& s : a) A.push_back(s.truncated(std::min(nout, s.n())).extended(nout));
    SeriesPoly Wt;
    for (unsigned i = 0; i < g; ++i)
        Wt.push_back(w[g - 1 - i].truncated(std::min(nout, w[g - 1 - i].n())).extended(nout));
    SeriesPoly P = sp_mul(A, Wt, nout);
    std::vector<TruncatedSeries> out;
    out.reserve(g);
    for (unsigned k = 1; k <= g; ++k) {
        unsigned idx = k + g - 2;
        out.push_back(idx < P.size() ? P[idx] : TruncatedSeries(ctx, nout));
    }
    return out;
}

std::vector<TruncatedSeries> hankel_apply_naive(const std::vector<TruncatedSeries>& a,
                                                const std::vector<TruncatedSeries>& w,
                                                unsigned nout) {
    unsigned g = static_cast<unsigned>(w.size());
    if (a.size() != 2 * size_t(g) - 1)
        throw Error(Err::LengthMismatch, "hankel inputs must have lengths 2g-1 and g");
    const Ctx& ctx = a[0].ctx();
    if (nout == 0) nout = a[0].n();
    std::vector<TruncatedSeries> out;
    for (unsigned k = 1; k <= g; ++k) {
        TruncatedSeries acc(ctx, nout);
        for (unsigned i = 0; i < g; ++i) {
            const auto& ai = a[k + i - 1];
            acc = ts_add(acc, ts_mul(ai.truncated(std::min(nout, ai.n())).extended(nout),
                                     w[i].truncated(std::min(nout, w[i].n())).extended(nout),
                                     nout));
        }
        out.push_back(acc);
    }
    return out;
}

SeriesPoly modular_compose(const QuotRing& R, const SeriesPoly& A, const SeriesPoly& T) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g, n = R.n;
    if (A.is_zero()) return SeriesPoly(ctx, n, g - 1);
    unsigned degA = static_cast<unsigned>(A.size()) - 1;
    unsigned k = static_cast<unsigned>(std::ceil(std::sqrt(double(degA + 1))));
    if (k == 0) k = 1;
    std::vector<SeriesPoly> baby;
    baby.push_back(sp_low(sp_one(ctx, n), g));
    SeriesPoly Tred = qr_reduce(R, T);
    for (unsigned i = 1; i < k; ++i) baby.push_back(qr_mul(R, baby.back(), Tred));
    SeriesPoly giant = qr_mul(R, baby.back(), Tred);  // T^k
    unsigned chunks = (degA + k) / k;
    SeriesPoly res(ctx, n, g - 1);
    for (unsigned j = chunks; j-- > 0;) {
        SeriesPoly chunk(ctx, n, g - 1);
        for (unsigned i = 0; i < k; ++i) {
            unsigned idx = j * k + i;
            if (idx > degA) break;
            if (A[idx].is_zero()) continue;
            chunk = sp_add(chunk, sp_scale(baby[i], A[idx].extended(n)));
        }
        if (j + 1 == chunks)
            res = chunk;
        else
            res = sp_low(sp_add(qr_mul(R, res, giant), chunk), g);
    }
    return sp_low(res, g);
}

SeriesPoly modular_compose_horner(const QuotRing& R, const SeriesPoly& A,
                                  const SeriesPoly& T) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g, n = R.n;
    SeriesPoly res(ctx, n, g - 1);
    SeriesPoly Tred = qr_reduce(R, T);
    for (size_t i = A.size(); i-- > 0;) {
        res = qr_mul(R, res, Tred);
        SeriesPoly c(ctx, n, g - 1);
        c[0] = A[i].extended(n);
        res = sp_low(sp_add(res, c), g);
    }
    return res;
}

namespace {

TruncatedSeries qr_trace(const std::vector<TruncatedSeries>& s0, const SeriesPoly& A,
                         unsigned n) {
    const Ctx& ctx = A.ctx();
    TruncatedSeries acc(ctx, n);
    for (size_t i = 0; i < A.size() && i < s0.size(); ++i)
        acc = ts_add(acc, ts_mul(A[i], s0[i], n));
    return acc;
}

SeriesPoly min_poly_traces(const QuotRing& R, const SeriesPoly& T) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g, n = R.n;
    auto s0 = newton_sums_from0(R, g > 0 ? g - 1 : 0);
    std::vector<TruncatedSeries> pw;  // power sums of the images, 1-based
    pw.reserve(g + 1);
    pw.push_back(TruncatedSeries(ctx, n));  // unused slot 0
    SeriesPoly Tred = qr_reduce(R, T);
    SeriesPoly P = Tred;
    for (unsigned kk = 1; kk <= g; ++kk) {
        pw.push_back(qr_trace(s0, P, n));
        if (kk < g) P = qr_mul(R, P, Tred);
    }
    // Newton identities: p_k + sum c_{g-i} p_{k-i} + k c_{g-k} = 0
    std::vector<TruncatedSeries> c(g + 1, TruncatedSeries(ctx, n));
    c[g] = ts_one(ctx, n);
    for (unsigned kk = 1; kk <= g; ++kk) {
        TruncatedSeries acc = pw[kk];
        for (unsigned i = 1; i < kk; ++i)
            acc = ts_add(acc, ts_mul(c[g - i], pw[kk - i], n));
        Elem ik = inv(ctx, elem_from_int(ctx, static_cast<std::int64_t>(kk)));
        c[g - kk] = ts_neg(ts_scale(acc, ik));
    }
    SeriesPoly out(ctx, n, g);
    for (unsigned i = 0; i <= g; ++i) out[i] = c[i];
    out[g] = ts_one(ctx, n);
    return out;
}

SeriesPoly min_poly_berkowitz(const QuotRing& R, const SeriesPoly& T) {
    const Ctx& ctx = R.ctx();
    unsigned g = R.g, n = R.n;
    // columns of the multiplication-by-T matrix
    std::vector<std::vector<TruncatedSeries>> M(g, std::vector<TruncatedSeries>(g));
    SeriesPoly col = qr_reduce(R, T);
    for (unsigned j = 0; j < g; ++j) {
        for (unsigned i = 0; i < g; ++i)
            M[i][j] = i < col.size() ? col[i] : TruncatedSeries(ctx, n);
        if (j + 1 < g) {
            // col <- z*col mod U
            TruncatedSeries top = col[g - 1];
            SeriesPoly nxt(ctx, n, g - 1);
            for (unsigned i = g - 1; i >= 1; --i) nxt[i] = col[i - 1];
            nxt[0] = TruncatedSeries(ctx, n);
            for (unsigned i = 0; i < g; ++i)
                nxt[i] = ts_sub(nxt[i], ts_mul(top, R.U[i], n));
            col = nxt;
        }
    }
    // Berkowitz chain on leading principal submatrices
    std::vector<TruncatedSeries> c{ts_one(ctx, n), ts_neg(M[0][0])};
    for (unsigned r = 1; r < g; ++r) {
        std::vector<TruncatedSeries> v(r + 2, TruncatedSeries(ctx, n));
        v[0] = ts_one(ctx, n);
        v[1] = ts_neg(M[r][r]);
        std::vector<TruncatedSeries> w(r);
        for (unsigned i = 0; i < r; ++i) w[i] = M[i][r];
        for (unsigned i = 0; i < r; ++i) {
            TruncatedSeries dot(ctx, n);
            for (unsigned j = 0; j < r; ++j) dot = ts_add(dot, ts_mul(M[r][j], w[j], n));
            v[i + 2] = ts_neg(dot);
            if (i + 1 < r) {
                std::vector<TruncatedSeries> w2(r);
                for (unsigned row = 0; row < r; ++row) {
                    TruncatedSeries acc(ctx, n);
                    for (unsigned j = 0; j < r; ++j)
                        acc = ts_add(acc, ts_mul(M[row][j], w[j], n));
                    w2[row] = acc;
                }
                w = std::move(w2);
            }
        }
        std::vector<TruncatedSeries> c2(r + 2, TruncatedSeries(ctx, n));
        for (unsigned i = 0; i < r + 2; ++i)
            for (unsigned j = 0; j <= i && j < c.size(); ++j)
                c2[i] = ts_add(c2[i], ts_mul(v[i - j], c[j], n));
        c = std::move(c2);
    }
    SeriesPoly out(ctx, n, g);
    for (unsigned kk = 0; kk <= g; ++kk) out[g - kk] = c[kk];
    out[g] = ts_one(ctx, n);
    return out;
}

} // namespace

SeriesPoly min_poly_of(const QuotRing& R, const SeriesPoly& T) {
    if (R.ctx().p() > R.g) return min_poly_traces(R, T);
    return min_poly_berkowitz(R, T);
}

} // namespace hypiso
