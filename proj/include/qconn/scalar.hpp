#pragma once

#include <gmpxx.h>
#include <string>

#include "qconn/error.hpp"

namespace qconn {

// Exact arithmetic only: mpz/mpq everywhere, no floating point in the core.
using Int = mpz_class;
using Scalar = mpq_class;

/* A prime p >= 2, checked by deterministic trial division (inputs are small). */
struct PrimeContext {
    long p;
    explicit PrimeContext(long prime);
    Int pow(unsigned long e) const; // p^e
};

/* p-adic valuation value; +infinity for 0. Normalized so val(p^i) = i. */
struct Valuation {
    bool finite = true;
    long v = 0;

    static Valuation infinity() { return {false, 0}; }
    static Valuation of(long x) { return {true, x}; }

    bool operator==(const Valuation&) const = default;
    bool operator<(const Valuation& o) const
    {
        if (!finite) return false;
        if (!o.finite) return true;
        return v < o.v;
    }
    bool operator>=(const Valuation& o) const { return !(*this < o); }
    // val >= bound for an integer bound; infinity dominates everything
    bool at_least(long bound) const { return !finite || v >= bound; }
    std::string to_string() const { return finite ? std::to_string(v) : "+inf"; }
};

long int_valuation(const Int& n, long p); // n != 0

Valuation valuation(const Scalar& x, const PrimeContext& ctx);

/* Image of x under Z_(p) -> Z/p^m, as a residue in [0, p^m).
   Throws Errc::non_integral when the denominator is divisible by p. */
Int reduce_mod(const Scalar& x, const PrimeContext& ctx, unsigned long m);

/* val_p(j!), computed by Legendre's sum and by the digit-sum formula
   (j - s_p(j))/(p-1); the two must agree. */
Valuation factorial_valuation(unsigned long j, const PrimeContext& ctx);

long digit_sum(unsigned long j, long p);

Scalar scalar_from_string(const std::string& s); // "a" or "a/b", b > 0 after canonicalization
std::string scalar_to_string(const Scalar& x);

Scalar scalar_pow(const Scalar& base, long e); // e may be negative for nonzero base

} // namespace qconn
