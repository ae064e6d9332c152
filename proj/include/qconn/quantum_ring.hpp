#pragma once

#include <map>
#include <string>

#include "qconn/series_matrix.hpp"

namespace qconn {

/* One term N q^e x_k of a quantum product or ring element. */
struct RingTerm {
    Scalar coeff;
    long q_exp = 0;
    int index = 0; // basis index
};

using RingElement = std::vector<RingTerm>; // canonical: sorted by (q_exp, index), merged, nonzero

RingElement canonicalize(RingElement terms);
RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_scale(const RingElement& a, const Scalar& c);
bool ring_equal(const RingElement& a, const RingElement& b);

/* Finite quantum-cohomology ring data: labeled graded basis, structure
   constants for every basis pair, the first Chern class, and the complex
   dimension. Validated on load. */
class QuantumRingSlice {
public:
    std::string name;
    std::vector<std::string> labels;
    std::vector<long> degrees; // even
    int unit_index = 0;
    RingElement c1; // q_exp 0 terms only
    long dim_c = 0;
    // products[i][j] = x_i *_q x_j; all pairs present
    std::vector<std::vector<RingElement>> products;

    int index_of(const std::string& label) const;
    RingElement multiply(const RingElement& a, const RingElement& b) const;
    RingElement unit() const { return {{Scalar(1), 0, unit_index}}; }

    /* Checks grading, unit, associativity on all triples; throws
       GradingViolation / UnitFailure / AssociativityFailure naming indices. */
    void validate() const;
};

/* Quantum connection restricted to a single (even) degree d, per the slice
   basis q^j x with j = ceil(d/2) - dim_C .. floor(d/2), ordered by q-exponent
   descending then basis index. In the presented (minus) convention the germ
   is -tau^2 d/dtau + A^0 + A^1 tau with A^0 the matrix of q^{-1} c1 *_q and
   A^1 = diag(j). */
struct SliceBasisElement {
    long q_exp;
    int index;
};

struct DegreeSliceConnection {
    long degree = 0;
    std::vector<SliceBasisElement> basis;
    ConnectionGerm germ; // normalized internally to the plus convention
};

DegreeSliceConnection build_connection(const QuantumRingSlice& ring, long degree);

struct IdempotentCheck {
    bool is_idempotent = false;
    long alpha = 0; // q-pole order, 0 for q-regular elements
};

IdempotentCheck idempotent_pole_order(const QuantumRingSlice& ring, const RingElement& e);

/* Closed-form series for the two worked examples, and the series derived
   from them by the defining relations. */
enum class ReferenceName {
    cp1_H21,
    cp1_H11,
    cp1_H12,
    cp1_H22,
    blowup_E12,
    blowup_E23,
    blowup_E13,
};

ReferenceName reference_name_from_string(const std::string& s);
TruncatedSeries reference_series(ReferenceName name, long order);

} // namespace qconn
