#include "qconn/scalar.hpp"

namespace qconn {

const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::non_integral: return "NonIntegral";
    case Errc::order_mismatch: return "OrderMismatch";
    case Errc::zero_series: return "ZeroSeries";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::singular_leading_term: return "SingularLeadingTerm";
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::non_split_spectrum: return "NonSplitSpectrum";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::grading_violation: return "GradingViolation";
    case Errc::associativity_failure: return "AssociativityFailure";
    case Errc::unit_failure: return "UnitFailure";
    case Errc::empty_slice: return "EmptySlice";
    case Errc::not_a_cocycle: return "NotACocycle";
    case Errc::odd_degree: return "OddDegree";
    case Errc::window_too_narrow: return "WindowTooNarrow";
    case Errc::config_cap: return "ConfigCap";
    case Errc::parse_error: return "ParseError";
    }
    return "Error";
}

PrimeContext::PrimeContext(long prime) : p(prime)
{
    if (prime < 2)
        throw Error(Errc::precondition_violated, "p must be >= 2, got " + std::to_string(prime));
    for (long d = 2; d * d <= prime; ++d)
        if (prime % d == 0)
            throw Error(Errc::precondition_violated, std::to_string(prime) + " is not prime");
}

Int PrimeContext::pow(unsigned long e) const
{
    Int out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), e);
    return out;
}

long int_valuation(const Int& n, long p)
{
    Int q, r, cur = n;
    long v = 0;
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), cur.get_mpz_t(), static_cast<unsigned long>(p));
        if (r != 0) return v;
        cur = q;
        ++v;
    }
}

Valuation valuation(const Scalar& x, const PrimeContext& ctx)
{
    if (x == 0) return Valuation::infinity();
    long v = int_valuation(Int(x.get_num()), ctx.p) - int_valuation(Int(x.get_den()), ctx.p);
    return Valuation::of(v);
}

Int reduce_mod(const Scalar& x, const PrimeContext& ctx, unsigned long m)
{
    Int mod = ctx.pow(m);
    Int den(x.get_den());
    Int den_inv;
    if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw Error(Errc::non_integral,
                    "denominator of " + scalar_to_string(x) + " is divisible by " + std::to_string(ctx.p));
    Int out = Int(x.get_num()) * den_inv;
    mpz_fdiv_r(out.get_mpz_t(), out.get_mpz_t(), mod.get_mpz_t());
    return out;
}

long digit_sum(unsigned long j, long p)
{
    long s = 0;
    while (j) {
        s += static_cast<long>(j % static_cast<unsigned long>(p));
        j /= static_cast<unsigned long>(p);
    }
    return s;
}

Valuation factorial_valuation(unsigned long j, const PrimeContext& ctx)
{
    long legendre = 0;
    for (unsigned long q = j / static_cast<unsigned long>(ctx.p); q > 0; q /= static_cast<unsigned long>(ctx.p))
        legendre += static_cast<long>(q);
    long by_digits = (static_cast<long>(j) - digit_sum(j, ctx.p)) / (ctx.p - 1);
    if (legendre != by_digits)
        throw Error(Errc::precondition_violated, "factorial valuation formulas disagree"); // unreachable
    return Valuation::of(legendre);
}

Scalar scalar_from_string(const std::string& s)
{
    Scalar x;
    if (s.empty() || mpq_set_str(x.get_mpq_t(), s.c_str(), 10) != 0)
        throw Error(Errc::parse_error, "bad scalar '" + s + "'");
    if (x.get_den() == 0)
        throw Error(Errc::parse_error, "zero denominator in '" + s + "'");
    x.canonicalize();
    return x;
}

std::string scalar_to_string(const Scalar& x)
{
    return x.get_str();
}

Scalar scalar_pow(const Scalar& base, long e)
{
    if (e == 0) return Scalar(1);
    if (base == 0 && e < 0)
        throw Error(Errc::precondition_violated, "0 to a negative power");
    Scalar acc(1), b = base;
    long n = e > 0 ? e : -e;
    for (; n > 0; n >>= 1) {
        if (n & 1) acc *= b;
        b *= b;
    }
    if (e < 0) acc = Scalar(1) / acc;
    return acc;
}

} // namespace qconn
