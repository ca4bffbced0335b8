/****************************************************************
 * Fixed-point arithmetic in O_K / p^M O_K, where K is an
 * unramified extension of Q_p of degree d given by a monic
 * modulus that is irreducible over the residue field.
 *
 * Elements are stored as d residues mod p^M (least degree first).
 * Divisions by p are explicit and report the digits they lose;
 * everything else is exact arithmetic in the quotient ring.
 ****************************************************************/
#ifndef HYPISO_PADIC_HPP
#define HYPISO_PADIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace hypiso {

/* Ring context: p odd prime, M >= 1 working digits, extension degree d.
 * p^M must fit in 63 bits; larger contexts are rejected at construction.
 * For d > 1 the modulus holds the d low coefficients of the monic
 * degree-d defining polynomial, reduced mod p^M. */
class Ctx {
public:
    Ctx(std::uint64_t p, unsigned M, unsigned d = 1,
        std::vector<std::uint64_t> modulus_tail = {});

    std::uint64_t p() const { return p_; }
    unsigned M() const { return M_; }
    unsigned d() const { return d_; }
    std::uint64_t pM() const { return pM_; }
    std::uint64_t p_pow(unsigned e) const; // p^e for e <= M
    const std::vector<std::uint64_t>& modulus_tail() const { return mod_; }

    // same ring?  (value comparison; distinct objects may be compatible)
    bool compatible(const Ctx& o) const;

    // the residue field view of this ring (M = 1)
    Ctx residue() const;

    // residue field cardinality p^d, when it fits 63 bits
    std::optional<std::uint64_t> residue_card() const;

    /* scalar helpers mod p^M */
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    std::uint64_t inv_scalar(std::uint64_t a) const;  // NotUnit if p | a
    std::uint64_t r64() const { return r64_; }        // 2^64 mod p^M

private:
    std::uint64_t p_;
    unsigned M_, d_;
    std::uint64_t pM_;
    std::uint64_t r64_;
    std::vector<std::uint64_t> mod_;      // size d when d > 1, else empty
    std::vector<std::uint64_t> ppow_;     // p^0 .. p^M
};

/* One element of O_K/p^M O_K: d residues, coefficients of the power
 * basis of the extension. For d = 1 this is a single residue. */
struct Elem {
    std::vector<std::uint64_t> c;

    Elem() = default;
    explicit Elem(std::vector<std::uint64_t> v) : c(std::move(v)) {}

    bool operator==(const Elem&) const = default;
};

Elem elem_zero(const Ctx& ctx);
Elem elem_one(const Ctx& ctx);
Elem elem_from_int(const Ctx& ctx, std::int64_t v);
// parse a (possibly signed, arbitrarily long) decimal string, reduced mod p^M
Elem elem_from_decimal(const Ctx& ctx, const std::string& s);
std::uint64_t scalar_from_decimal(const Ctx& ctx, const std::string& s);
std::vector<std::string> elem_to_decimal(const Ctx& ctx, const Elem& a);

enum class ArithOp { Add, Sub, Mul };

Elem add(const Ctx& ctx, const Elem& a, const Elem& b);
Elem sub(const Ctx& ctx, const Elem& a, const Elem& b);
Elem mul(const Ctx& ctx, const Elem& a, const Elem& b);
Elem neg(const Ctx& ctx, const Elem& a);
Elem arith(const Ctx& ctx, const Elem& a, const Elem& b, ArithOp op);

bool is_zero(const Elem& a);
bool is_unit(const Ctx& ctx, const Elem& a);  // nonzero image in residue field
Elem reduce_mod(const Ctx& ctx, const Elem& a, unsigned digits); // mod p^digits

/* Multiplicative inverse of a unit (Hensel lift of the residue-field
 * inverse for d > 1, extended gcd for d = 1). Throws NotUnit. */
Elem inv(const Ctx& ctx, const Elem& a);

/* Square root of a unit with a caller-supplied residue-field branch.
 * The branch pins the sign: the result reduces to `branch` mod p.
 * Throws BadBranch if branch^2 != a mod p, NoSquareRoot if a has no
 * root in the residue field at all. */
Elem sqrt_with_branch(const Ctx& ctx, const Elem& a, const Elem& branch);

// is a a square in the residue field?  (Euler criterion on the norm side)
bool residue_is_square(const Ctx& ctx, const Elem& a);
// some residue-field square root of a, if one exists (M is ignored; the
// result lives mod p). Tonelli-Shanks for d = 1, search for small p^d.
std::optional<Elem> residue_sqrt(const Ctx& ctx, const Elem& a);

/* Exact division by p^e. The stored value must be divisible by p^e;
 * the quotient is only known mod p^{M-e} and the loss is returned.
 * Throws NonIntegral otherwise. */
std::pair<Elem, unsigned> divide_by_p_power(const Ctx& ctx, const Elem& a, unsigned e);

// worst-case count of base-ring multiplications, for benchmark diagnostics
std::uint64_t& mul_op_counter();

} // namespace hypiso

#endif
