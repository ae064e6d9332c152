#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qconn/quantum_ring.hpp"
#include "qconn/series_checks.hpp"

using namespace qconn;

namespace {

Scalar rq(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-40, 40), den(1, 30);
    Scalar x(num(rng), den(rng));
    x.canonicalize();
    return x;
}

TruncatedSeries random_series(std::mt19937_64& rng, long order)
{
    TruncatedSeries s(order);
    for (long k = 0; k <= order; ++k) s[k] = rq(rng);
    return s;
}

} // namespace

TEST_CASE("valuation on rationals")
{
    PrimeContext p3(3), p2(2);
    CHECK(valuation(Scalar(18), p3) == Valuation::of(2));
    CHECK(valuation(Scalar(1, 2), p2) == Valuation::of(-1));
    CHECK(valuation(Scalar(0), p3) == Valuation::infinity());
    CHECK(valuation(Scalar(9, 4), p2) == Valuation::of(-2));
}

TEST_CASE("valuation is multiplicative and ultrametric")
{
    std::mt19937_64 rng(20240817);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        PrimeContext ctx(p);
        for (int trial = 0; trial < 200; ++trial) {
            Scalar x = rq(rng), y = rq(rng);
            if (x == 0 || y == 0) continue;
            Valuation vx = valuation(x, ctx), vy = valuation(y, ctx);
            CHECK(valuation(x * y, ctx) == Valuation::of(vx.v + vy.v));
            Valuation vsum = valuation(x + y, ctx);
            long lo = std::min(vx.v, vy.v);
            CHECK(vsum.at_least(lo));
            if (vx.v != vy.v) CHECK(vsum == Valuation::of(lo));
        }
    }
}

TEST_CASE("reduce_mod basics and ring homomorphism")
{
    PrimeContext p3(3);
    CHECK(reduce_mod(Scalar(1, 2), p3, 2) == 5); // 2*5 = 10 = 1 mod 9
    CHECK(reduce_mod(Scalar(9), p3, 2) == 0);
    CHECK_THROWS_AS(reduce_mod(Scalar(1, 3), p3, 1), Error);

    std::mt19937_64 rng(7);
    PrimeContext p5(5);
    Int mod = p5.pow(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<long> num(-50, 50), den(1, 20);
        Scalar x(num(rng), den(rng)), y(num(rng), den(rng));
        x.canonicalize();
        y.canonicalize();
        if (x.get_den() % 5 == 0 || y.get_den() % 5 == 0) continue;
        CHECK((reduce_mod(x, p5, 3) + reduce_mod(y, p5, 3)) % mod == reduce_mod(x + y, p5, 3));
        CHECK((reduce_mod(x, p5, 3) * reduce_mod(y, p5, 3)) % mod == reduce_mod(x * y, p5, 3));
    }
}

TEST_CASE("factorial valuation")
{
    CHECK(factorial_valuation(10, PrimeContext(2)) == Valuation::of(8));
    CHECK(factorial_valuation(0, PrimeContext(5)) == Valuation::of(0));
    CHECK(factorial_valuation(81, PrimeContext(3)) == Valuation::of(40));
    // the implementation cross-checks Legendre against the digit-sum formula
    for (long p : {2L, 3L, 5L, 7L}) {
        PrimeContext ctx(p);
        for (unsigned long j = 0; j <= 10000; ++j) (void)factorial_valuation(j, ctx);
    }
}

TEST_CASE("prime context rejects composites")
{
    CHECK_THROWS_AS(PrimeContext(1), Error);
    CHECK_THROWS_AS(PrimeContext(6), Error);
    CHECK_NOTHROW(PrimeContext(2));
    CHECK_NOTHROW(PrimeContext(97));
}

TEST_CASE("series ring operations")
{
    TruncatedSeries a(3), b(3);
    a[0] = 1;
    a[1] = 1; // 1 + tau
    b[0] = 1;
    b[1] = -1; // 1 - tau
    TruncatedSeries prod = a * b;
    CHECK(prod[0] == 1);
    CHECK(prod[1] == 0);
    CHECK(prod[2] == -1);
    CHECK(prod[3] == 0);

    TruncatedSeries one = TruncatedSeries::constant(Scalar(1), 3);
    CHECK(a * one == a);

    TruncatedSeries geom(5), onemt(5);
    for (long k = 0; k <= 5; ++k) geom[k] = 1;
    onemt[0] = 1;
    onemt[1] = -1;
    CHECK(geom * onemt == TruncatedSeries::constant(Scalar(1), 5));

    CHECK_THROWS_AS((void)(a * geom), Error);
}

TEST_CASE("series multiplication is commutative, associative, distributive")
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        TruncatedSeries a = random_series(rng, 16), b = random_series(rng, 16),
                        c = random_series(rng, 16);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("tau derivative operators")
{
    TruncatedSeries s(3);
    s[0] = 1;
    s[2] = 1; // 1 + tau^2
    TruncatedSeries t = s.tau_d_tau();
    CHECK(t[0] == 0);
    CHECK(t[2] == 2);

    CHECK(TruncatedSeries::constant(Scalar(5), 4).tau_d_tau().is_zero());

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        TruncatedSeries a = random_series(rng, 12), b = random_series(rng, 12);
        CHECK((a * b).tau_d_tau() == a.tau_d_tau() * b + a * b.tau_d_tau());
    }

    // d_tau drops the order by one
    TruncatedSeries h = random_series(rng, 10);
    CHECK(h.d_tau().order() == 9);
}

TEST_CASE("d_tau of tau*H21 agrees with the product rule")
{
    // both sides computed independently on the first 10 coefficients
    TruncatedSeries h = reference_series(ReferenceName::cp1_H21, 12);
    TruncatedSeries lhs = h.mul_tau().d_tau(); // d/dtau (tau*H21), order 12
    TruncatedSeries rhs = h + h.d_tau().mul_tau(); // H21 + tau*H21'
    for (long k = 0; k <= 10; ++k) CHECK(lhs[k] == rhs[k]);
}

TEST_CASE("newton polygon")
{
    PrimeContext p3(3);

    TruncatedSeries geom(20);
    for (long k = 0; k <= 20; ++k) geom[k] = scalar_pow(Scalar(3), k);
    auto rep = newton_polygon(geom, p3);
    REQUIRE(rep.hull.size() == 2);
    CHECK(rep.hull.front() == NewtonPoint{0, 0});
    CHECK(rep.hull.back() == NewtonPoint{20, 20});
    CHECK(*rep.min_slope_tail == Scalar(1));

    TruncatedSeries ones(20);
    for (long k = 0; k <= 20; ++k) ones[k] = 1;
    auto rep2 = newton_polygon(ones, p3);
    CHECK(rep2.hull.size() == 2);
    CHECK(rep2.hull.back().val == 0);
    CHECK(*rep2.min_slope_tail == Scalar(0));

    TruncatedSeries facts(81);
    Int f = 1;
    for (long k = 0; k <= 81; ++k) {
        facts[k] = Scalar(f);
        f *= (k + 1);
    }
    auto rep3 = newton_polygon(facts, p3);
    bool saw_81 = false;
    for (const auto& pt : rep3.points)
        if (pt.k == 81) {
            saw_81 = true;
            CHECK(pt.val == factorial_valuation(81, p3).v);
        }
    CHECK(saw_81);

    CHECK_THROWS_AS(newton_polygon(TruncatedSeries(5), p3), Error);
}

TEST_CASE("newton hull is convex and lies below the points")
{
    std::mt19937_64 rng(99);
    PrimeContext p2(2);
    for (int trial = 0; trial < 50; ++trial) {
        TruncatedSeries s = random_series(rng, 24);
        if (s.is_zero()) continue;
        auto rep = newton_polygon(s, p2);
        for (size_t t = 2; t < rep.hull.size(); ++t) {
            const auto &a = rep.hull[t - 2], &b = rep.hull[t - 1], &c = rep.hull[t];
            CHECK(Scalar(b.val - a.val, b.k - a.k) < Scalar(c.val - b.val, c.k - b.k));
        }
        for (const auto& pt : rep.points)
            for (size_t t = 1; t < rep.hull.size(); ++t) {
                const auto &a = rep.hull[t - 1], &b = rep.hull[t];
                if (pt.k < a.k || pt.k > b.k) continue;
                CHECK(Int(pt.val - a.val) * Int(b.k - a.k) >= Int(b.val - a.val) * Int(pt.k - a.k));
            }
    }
}

TEST_CASE("log decay certificates")
{
    PrimeContext p3(3);

    // all-ones series: the first positive requirement is at k = 5
    // (alpha*p + beta = 4 < 5 demands val >= 1), and it fails there
    TruncatedSeries ones(50);
    for (long k = 0; k <= 50; ++k) ones[k] = 1;
    auto cert = check_log_decay(ones, p3, Scalar(1), Scalar(1));
    REQUIRE(!cert.pass());
    CHECK(cert.failure->k == 5);
    CHECK(cert.failure->m == 1);

    CHECK(check_log_decay(TruncatedSeries(30), p3, Scalar(1), Scalar(1)).pass());

    TruncatedSeries h21 = reference_series(ReferenceName::cp1_H21, 200);
    CHECK(check_log_decay(h21, p3, Scalar(1), Scalar(1)).pass());
}

TEST_CASE("log decay is monotone in (alpha, beta)")
{
    std::mt19937_64 rng(3131);
    PrimeContext p2(2);
    for (int trial = 0; trial < 40; ++trial) {
        TruncatedSeries s(30);
        for (long k = 0; k <= 30; ++k) {
            std::uniform_int_distribution<long> e(0, 6), num(1, 9);
            s[k] = Scalar(num(rng)) * scalar_pow(Scalar(2), e(rng));
        }
        auto base = check_log_decay(s, p2, Scalar(1), Scalar(2));
        if (base.pass()) {
            CHECK(check_log_decay(s, p2, Scalar(2), Scalar(2)).pass());
            CHECK(check_log_decay(s, p2, Scalar(1), Scalar(5)).pass());
        }
        // p-integral coefficients can only fail a requirement with m >= 1
        auto any = check_log_decay(s, p2, Scalar(0), Scalar(0));
        if (!any.pass()) CHECK(any.failure->m >= 1);
    }
}

TEST_CASE("slope floor")
{
    PrimeContext p3(3);
    TruncatedSeries facts(200);
    Int f = 1;
    for (long k = 0; k <= 200; ++k) {
        facts[k] = Scalar(f);
        f *= (k + 1);
    }
    // val_3(k!) = (k - s_3(k))/2 >= k/2 - 2 first fails at k = 17, where the
    // digit sum reaches 5; gamma = 9/2 covers all k <= 200 (digit sums <= 9)
    auto v = slope_floor(facts, p3, Scalar(1, 2), Scalar(2), 0);
    REQUIRE(!v.pass());
    CHECK(*v.first_failure == 17);
    CHECK(slope_floor(facts, p3, Scalar(1, 2), Scalar(9, 2), 0).pass());

    CHECK(slope_floor(TruncatedSeries::constant(Scalar(7), 10), p3, Scalar(1), Scalar(0), 0).pass());

    TruncatedSeries ones(10);
    for (long k = 0; k <= 10; ++k) ones[k] = 1;
    auto w = slope_floor(ones, p3, Scalar(1, 2), Scalar(1), 0);
    REQUIRE(!w.pass());
    CHECK(*w.first_failure == 3);
}

TEST_CASE("mod-p reduction degree")
{
    PrimeContext p3(3);
    TruncatedSeries h21 = reference_series(ReferenceName::cp1_H21, 100);
    auto d = mod_p_reduction_degree(h21, p3);
    CHECK(d.degree == 2);

    CHECK(mod_p_reduction_degree(TruncatedSeries::constant(Scalar(1), 5), p3).degree == 0);

    TruncatedSeries s(8);
    s[0] = 4;
    for (long k = 1; k <= 8; ++k) s[k] = 3;
    CHECK(mod_p_reduction_degree(s, p3).degree == 0);

    TruncatedSeries bad(3);
    bad[1] = Scalar(1, 3);
    CHECK_THROWS_AS(mod_p_reduction_degree(bad, p3), Error);
}

TEST_CASE("scalar strings")
{
    CHECK(scalar_to_string(Scalar(-3, 7)) == "-3/7");
    CHECK(scalar_to_string(Scalar(5)) == "5");
    CHECK(scalar_from_string("10/4") == Scalar(5, 2));
    CHECK_THROWS_AS(scalar_from_string("1/0"), Error);
    CHECK_THROWS_AS(scalar_from_string("abc"), Error);
}
