#include "qconn/quantum_ring.hpp"

#include <algorithm>

namespace qconn {

RingElement canonicalize(RingElement terms)
{
    std::sort(terms.begin(), terms.end(), [](const RingTerm& a, const RingTerm& b) {
        return std::tie(a.q_exp, a.index) < std::tie(b.q_exp, b.index);
    });
    RingElement out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().q_exp == t.q_exp && out.back().index == t.index)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const RingTerm& t) { return t.coeff == 0; });
    return out;
}

RingElement ring_add(const RingElement& a, const RingElement& b)
{
    RingElement out = a;
    out.insert(out.end(), b.begin(), b.end());
    return canonicalize(std::move(out));
}

RingElement ring_scale(const RingElement& a, const Scalar& c)
{
    RingElement out = a;
    for (auto& t : out) t.coeff *= c;
    return canonicalize(std::move(out));
}

bool ring_equal(const RingElement& a, const RingElement& b)
{
    RingElement x = canonicalize(a), y = canonicalize(b);
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i].coeff != y[i].coeff || x[i].q_exp != y[i].q_exp || x[i].index != y[i].index)
            return false;
    return true;
}

int QuantumRingSlice::index_of(const std::string& label) const
{
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    throw Error(Errc::parse_error, "unknown basis label '" + label + "'");
}

RingElement QuantumRingSlice::multiply(const RingElement& a, const RingElement& b) const
{
    RingElement out;
    for (const auto& s : a)
        for (const auto& t : b)
            for (const auto& u : products[static_cast<size_t>(s.index)][static_cast<size_t>(t.index)])
                out.push_back({s.coeff * t.coeff * u.coeff, s.q_exp + t.q_exp + u.q_exp, u.index});
    return canonicalize(std::move(out));
}

void QuantumRingSlice::validate() const
{
    size_t n = labels.size();
    if (degrees.size() != n || products.size() != n)
        throw Error(Errc::parse_error, "ring tables have inconsistent sizes");
    for (size_t i = 0; i < n; ++i) {
        if (degrees[i] % 2 != 0)
            throw Error(Errc::grading_violation, "basis class '" + labels[i] + "' has odd degree");
        if (products[i].size() != n)
            throw Error(Errc::parse_error, "product row " + std::to_string(i) + " incomplete");
    }
    for (const auto& t : c1)
        if (degrees[static_cast<size_t>(t.index)] != 2 || t.q_exp != 0)
            throw Error(Errc::grading_violation, "c1 must be a combination of degree-2 classes");

    // grading: |x_i| + |x_j| = |x_k| + 2e on every nonzero structure constant
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (const auto& t : products[i][j]) {
                if (t.q_exp < 0)
                    throw Error(Errc::grading_violation,
                                "negative q-exponent in product (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
                if (degrees[i] + degrees[j] != degrees[static_cast<size_t>(t.index)] + 2 * t.q_exp)
                    throw Error(Errc::grading_violation,
                                "grading fails in product (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") -> " + std::to_string(t.index));
            }

    // unit
    for (size_t i = 0; i < n; ++i) {
        RingElement xi{{Scalar(1), 0, static_cast<int>(i)}};
        if (!ring_equal(multiply(unit(), xi), xi) || !ring_equal(multiply(xi, unit()), xi))
            throw Error(Errc::unit_failure,
                        "unit does not act as identity on basis index " + std::to_string(i));
    }

    // associativity on all basis triples
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                RingElement xi{{Scalar(1), 0, static_cast<int>(i)}};
                RingElement xj{{Scalar(1), 0, static_cast<int>(j)}};
                RingElement xk{{Scalar(1), 0, static_cast<int>(k)}};
                if (!ring_equal(multiply(multiply(xi, xj), xk), multiply(xi, multiply(xj, xk))))
                    throw Error(Errc::associativity_failure,
                                "associativity fails on triple (" + std::to_string(i) + "," +
                                    std::to_string(j) + "," + std::to_string(k) + ")");
            }
}

DegreeSliceConnection build_connection(const QuantumRingSlice& ring, long degree)
{
    if (degree % 2 != 0)
        throw Error(Errc::precondition_violated, "slice degree must be even");
    DegreeSliceConnection out;
    out.degree = degree;

    long j_hi = degree / 2; // floor for even degree
    long j_lo = j_hi - ring.dim_c;
    // ordering: q-exponent descending, then basis index
    for (long j = j_hi; j >= j_lo; --j)
        for (size_t i = 0; i < ring.labels.size(); ++i)
            if (ring.degrees[i] == degree - 2 * j)
                out.basis.push_back({j, static_cast<int>(i)});
    if (out.basis.empty())
        throw Error(Errc::empty_slice, "degree " + std::to_string(degree) + " slice is empty");

    long r = static_cast<long>(out.basis.size());
    auto slice_pos = [&](long q_exp, int index) -> long {
        for (long t = 0; t < r; ++t)
            if (out.basis[static_cast<size_t>(t)].q_exp == q_exp &&
                out.basis[static_cast<size_t>(t)].index == index)
                return t;
        throw Error(Errc::grading_violation, "product term leaves the degree slice");
    };

    QMatrix a0(r, r), a1(r, r);
    for (long col = 0; col < r; ++col) {
        const auto& e = out.basis[static_cast<size_t>(col)];
        // q^{-1} c1 *_q (q^j x) = sum of terms in the same slice
        RingElement x{{Scalar(1), e.q_exp - 1, e.index}};
        for (const auto& t : ring.multiply(ring.c1, x))
            a0.at(slice_pos(t.q_exp, t.index), col) += t.coeff;
        a1.at(col, col) = Scalar(e.q_exp); // -(Gr - d)/2 on q^j x is j
    }
    out.germ = ConnectionGerm(r, SignConvention::minus, {a0, a1});
    return out;
}

IdempotentCheck idempotent_pole_order(const QuantumRingSlice& ring, const RingElement& e)
{
    IdempotentCheck out;
    out.is_idempotent = ring_equal(ring.multiply(e, e), canonicalize(e));
    for (const auto& t : canonicalize(e))
        out.alpha = std::max(out.alpha, -t.q_exp);
    if (out.alpha < 0) out.alpha = 0;
    return out;
}

ReferenceName reference_name_from_string(const std::string& s)
{
    if (s == "cp1_H21") return ReferenceName::cp1_H21;
    if (s == "cp1_H11") return ReferenceName::cp1_H11;
    if (s == "cp1_H12") return ReferenceName::cp1_H12;
    if (s == "cp1_H22") return ReferenceName::cp1_H22;
    if (s == "blowup_E12") return ReferenceName::blowup_E12;
    if (s == "blowup_E23") return ReferenceName::blowup_E23;
    if (s == "blowup_E13") return ReferenceName::blowup_E13;
    throw Error(Errc::parse_error, "unknown reference series '" + s + "'");
}

namespace {

// 1 + sum_{j>0} tau^{2j} binom(2j-1, j)^2 (2j)! / 2^{8j-2}
TruncatedSeries cp1_h21(long order)
{
    TruncatedSeries s(order);
    s[0] = 1;
    for (long j = 1; 2 * j <= order; ++j) {
        Int binom, fact;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(2 * j - 1),
                     static_cast<unsigned long>(j));
        mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * j));
        Int den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(8 * j - 2));
        Scalar c(binom * binom * fact, den);
        c.canonicalize();
        s[2 * j] = c;
    }
    return s;
}

TruncatedSeries cp1_h11(long order)
{
    // (1/4) tau d/dtau (tau * H21), computed above the target order
    TruncatedSeries h21 = cp1_h21(order + 1);
    return (h21.mul_tau().tau_d_tau() * Scalar(1, 4)).truncate(order);
}

TruncatedSeries blowup_series(long order, bool alternate, const Scalar& scale)
{
    TruncatedSeries s(order);
    for (long k = 0; k <= order; ++k) {
        Int fact;
        mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k));
        Scalar c(fact);
        if (alternate && k % 2 == 1) c = -c;
        s[k] = c * scale;
    }
    return s;
}

} // namespace

TruncatedSeries reference_series(ReferenceName name, long order)
{
    switch (name) {
    case ReferenceName::cp1_H21:
        return cp1_h21(order);
    case ReferenceName::cp1_H11:
        return cp1_h11(order);
    case ReferenceName::cp1_H22:
        return -cp1_h11(order);
    case ReferenceName::cp1_H12: {
        // H21 - (1/2) tau^2 d/dtau (H11)
        TruncatedSeries h11 = cp1_h11(order);
        TruncatedSeries corr = h11.d_tau().mul_tau().mul_tau(); // tau^2 H11'
        return cp1_h21(order) - corr.truncate(order) * Scalar(1, 2);
    }
    case ReferenceName::blowup_E12:
        return blowup_series(order, true, Scalar(1));
    case ReferenceName::blowup_E23:
        return blowup_series(order, false, Scalar(-1));
    case ReferenceName::blowup_E13:
        return blowup_series(order, true, Scalar(1)) * blowup_series(order, false, Scalar(-1));
    }
    throw Error(Errc::parse_error, "unknown reference series");
}

} // namespace qconn
