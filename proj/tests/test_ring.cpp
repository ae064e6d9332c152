#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qconn/io.hpp"
#include "qconn/splitting.hpp"

using namespace qconn;

namespace {
const std::string kData = QCONN_DATA_DIR;
}

TEST_CASE("cp1 ring validates and multiplies")
{
    QuantumRingSlice ring = load_ring(kData + "/cp1.ring");
    CHECK(ring.labels.size() == 2);
    CHECK(ring.dim_c == 1);
    int h = ring.index_of("h");
    RingElement hh = ring.multiply({{Scalar(1), 0, h}}, {{Scalar(1), 0, h}});
    REQUIRE(hh.size() == 1);
    CHECK(hh[0].q_exp == 2);
    CHECK(hh[0].index == ring.unit_index);
}

TEST_CASE("point ring validates, builds the zero connection")
{
    QuantumRingSlice point = load_ring(kData + "/point.ring");
    DegreeSliceConnection slice = build_connection(point, 0);
    CHECK(slice.basis.size() == 1);
    CHECK(slice.germ.a(0).is_zero());
    CHECK(slice.germ.a(1).is_zero());
}

TEST_CASE("corrupted ring data is rejected with named indices")
{
    std::string good = read_file(kData + "/cp1.ring");

    // h*h = q*one violates the grading (degree 4 vs 2)
    std::string bad = good;
    bad.replace(bad.find("h h = 1 q^2 one"), 15, "h h = 1 q^1 one");
    try {
        parse_ring(bad, "bad");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code == Errc::grading_violation);
    }

    // one*h = 2h breaks the unit axiom
    std::string bad2 = good;
    bad2.replace(bad2.find("one h = 1 q^0 h"), 15, "one h = 2 q^0 h");
    try {
        parse_ring(bad2, "bad2");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code == Errc::unit_failure);
    }

    // products must be declared for every pair
    std::string bad3 = good;
    bad3.erase(bad3.find("h one = 1 q^0 h"), 16);
    CHECK_THROWS_AS(parse_ring(bad3, "bad3"), Error);
}

TEST_CASE("associativity failures are detected")
{
    // a*(a*b) = q^3 a but (a*a)*b = b*b = 0
    std::string text =
        "[meta]\n"
        "dim_c = 2\n"
        "unit = u\n"
        "[basis]\n"
        "u 0\n"
        "a 2\n"
        "b 4\n"
        "[c1]\n"
        "[product]\n"
        "u u = 1 q^0 u\n"
        "u a = 1 q^0 a\n"
        "u b = 1 q^0 b\n"
        "a u = 1 q^0 a\n"
        "b u = 1 q^0 b\n"
        "a a = 1 q^0 b\n"
        "a b = 1 q^3 u\n"
        "b a = 0\n"
        "b b = 0\n";
    try {
        parse_ring(text, "assoc");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code == Errc::associativity_failure);
    }
}

TEST_CASE("cp1 degree-0 slice connection matches the worked matrices")
{
    QuantumRingSlice ring = load_ring(kData + "/cp1.ring");
    DegreeSliceConnection slice = build_connection(ring, 0);
    REQUIRE(slice.basis.size() == 2);
    // ordering: q-exponent descending -> (q^0 one, q^{-1} h)
    CHECK(slice.basis[0].q_exp == 0);
    CHECK(slice.basis[1].q_exp == -1);

    auto disp = slice.germ.displayed_coeffs();
    QMatrix a0(2, 2), a1(2, 2);
    a0.at(0, 1) = 2;
    a0.at(1, 0) = 2;
    a1.at(1, 1) = -1;
    CHECK(disp[0] == a0);
    CHECK(disp[1] == a1);
    CHECK(slice.germ.convention == SignConvention::minus);
    // internal plus-normalized coefficients are negated
    CHECK(slice.germ.a0() == -a0);
    CHECK(slice.germ.a(1) == -a1);
}

TEST_CASE("bundled blowup germ equals the printed matrix")
{
    ConnectionGerm germ = load_connection(kData + "/blowup.conn");
    auto disp = germ.displayed_coeffs();
    QMatrix a0(3, 3), a1(3, 3);
    a0.at(1, 0) = -1;
    a0.at(1, 1) = -1;
    a0.at(2, 1) = 1;
    a1.at(0, 0) = 1;
    a1.at(2, 2) = -1;
    CHECK(disp[0] == a0);
    CHECK(disp[1] == a1);
}

TEST_CASE("degree-slice connections are linear in tau")
{
    for (const char* name : {"/cp1.ring", "/point.ring"}) {
        QuantumRingSlice ring = load_ring(kData + name);
        for (long d : {0L, 2L, 4L}) {
            DegreeSliceConnection slice = build_connection(ring, d);
            CHECK(slice.germ.top_index() == 1);
        }
    }
}

TEST_CASE("idempotent detection with q-pole order")
{
    QuantumRingSlice ring = load_ring(kData + "/cp1.ring");
    int h = ring.index_of("h");
    int one = ring.unit_index;

    // (1 +- q^{-1} h)/2
    for (int sign : {1, -1}) {
        RingElement e = {{Scalar(1, 2), 0, one}, {Scalar(sign, 2), -1, h}};
        auto chk = idempotent_pole_order(ring, e);
        CHECK(chk.is_idempotent);
        CHECK(chk.alpha == 1);
    }

    auto unit_chk = idempotent_pole_order(ring, ring.unit());
    CHECK(unit_chk.is_idempotent);
    CHECK(unit_chk.alpha == 0);

    CHECK(!idempotent_pole_order(ring, {{Scalar(1), 0, h}}).is_idempotent);

    // the two idempotents are orthogonal and sum to the unit
    RingElement ep = {{Scalar(1, 2), 0, one}, {Scalar(1, 2), -1, h}};
    RingElement em = {{Scalar(1, 2), 0, one}, {Scalar(-1, 2), -1, h}};
    CHECK(ring_equal(ring_add(ep, em), ring.unit()));
    CHECK(ring.multiply(ep, em).empty());
}

TEST_CASE("reference series frozen values")
{
    TruncatedSeries h21 = reference_series(ReferenceName::cp1_H21, 2);
    CHECK(h21[0] == 1);
    CHECK(h21[1] == 0);
    CHECK(h21[2] == Scalar(1, 32));

    TruncatedSeries e12 = reference_series(ReferenceName::blowup_E12, 3);
    CHECK(e12[0] == 1);
    CHECK(e12[1] == -1);
    CHECK(e12[2] == 2);
    CHECK(e12[3] == -6);

    CHECK(reference_series(ReferenceName::cp1_H22, 20) ==
          -reference_series(ReferenceName::cp1_H11, 20));

    CHECK_THROWS_AS(reference_name_from_string("nope"), Error);
}

TEST_CASE("the four worked series satisfy covariant constancy jointly")
{
    long K = 40;
    QuantumRingSlice ring = load_ring(kData + "/cp1.ring");
    ConnectionGerm germ = build_connection(ring, 0).germ;
    SeriesMatrix h(2, K);
    TruncatedSeries h11 = reference_series(ReferenceName::cp1_H11, K);
    TruncatedSeries h12 = reference_series(ReferenceName::cp1_H12, K);
    TruncatedSeries h21 = reference_series(ReferenceName::cp1_H21, K);
    TruncatedSeries h22 = reference_series(ReferenceName::cp1_H22, K);
    for (long k = 0; k <= K; ++k) {
        h.coeff(k).at(0, 0) = h11[k];
        h.coeff(k).at(0, 1) = h12[k];
        h.coeff(k).at(1, 0) = h21[k];
        h.coeff(k).at(1, 1) = h22[k];
    }
    CHECK(covariant_derivative(germ, h).is_zero());
    CHECK(h * h == SeriesMatrix::identity(2, K));
}

TEST_CASE("ring files round-trip")
{
    for (const char* name : {"/cp1.ring", "/point.ring"}) {
        QuantumRingSlice ring = load_ring(kData + name);
        QuantumRingSlice again = parse_ring(serialize_ring(ring), "roundtrip");
        CHECK(ring.labels == again.labels);
        CHECK(ring.degrees == again.degrees);
        CHECK(ring.unit_index == again.unit_index);
        CHECK(ring.dim_c == again.dim_c);
        for (size_t i = 0; i < ring.labels.size(); ++i)
            for (size_t j = 0; j < ring.labels.size(); ++j)
                CHECK(ring_equal(ring.products[i][j], again.products[i][j]));
    }
}

TEST_CASE("odd slice degrees are rejected")
{
    QuantumRingSlice point = load_ring(kData + "/point.ring");
    CHECK_THROWS_AS(build_connection(point, 1), Error);
}
