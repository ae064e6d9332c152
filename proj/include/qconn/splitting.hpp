#pragma once

#include "qconn/series_checks.hpp"
#include "qconn/series_matrix.hpp"

namespace qconn {

/* Spectrum data of a constant matrix whose characteristic polynomial splits
   over Q, with the generalized eigenprojectors (polynomials in the matrix). */
struct EigenPairValuation {
    Scalar lambda_i, lambda_j;
    Valuation val; // val_p(lambda_i - lambda_j)
    bool is_unit() const { return val.finite && val.v == 0; }
};

struct EigenData {
    std::vector<Scalar> eigenvalues; // distinct, ascending
    std::vector<long> multiplicities;
    std::vector<QMatrix> projectors;
    std::vector<QMatrix> nilpotents;          // (A - lambda) e_lambda
    std::vector<EigenPairValuation> diff_vals; // i < j pairs
    bool all_differences_units() const;
};

/* Rational roots with multiplicity; throws Errc::non_split_spectrum when a
   factor without rational roots remains. */
EigenData generalized_eigenprojectors(const QMatrix& a0, const PrimeContext& ctx);

/* Result of the order-by-order block diagonalization. */
struct SplittingResult {
    EigenData eigen;
    SeriesMatrix gauge;                    // G = I + O(tau)
    std::vector<SeriesMatrix> projectors;  // E_lambda(tau) = G e_lambda G^{-1}
    long residual = 0;                     // order up to which all invariants verified
};

/* The diagonal blocks of G^k are not pinned by the construction; either rule
   yields the same projectors (only the gauge differs). */
enum class GaugeNormalization { zero_diagonal, seeded_diagonal };

SplittingResult block_split(const ConnectionGerm& conn, const PrimeContext& ctx, long order,
                            GaugeNormalization norm = GaugeNormalization::zero_diagonal);

/* Extension of an endomorphism across a simple pole (A^0 = 0): solves
   (k id + ad_{A^1}) E^k = -sum_{i=2}^{k+1} [A^i, E^{k+1-i}] for k = 1..K. */
struct ResonanceReport {
    enum class Status { unique, obstructed, non_unique };
    Status status = Status::unique;
    long order = 0;               // first k where the operator was singular
    QMatrix obstruction;          // nonzero residual component (obstructed)
    long kernel_dim = 0;          // dim ker(k id + ad_{A^1}) at `order`
    std::vector<QMatrix> kernel;  // basis of that kernel
};

struct ExtensionResult {
    SeriesMatrix series; // minimal-support representative; zero beyond an obstruction
    ResonanceReport report;
};

ExtensionResult extend_endomorphism(const ConnectionGerm& conn, const QMatrix& e0, long order);

/* Entrywise log-decay aggregate over a series matrix. */
struct DivisibilityReport {
    Scalar alpha, beta;
    long p = 0;
    long verified_up_to = 0;
    bool pass = true;
    long fail_row = -1, fail_col = -1;
    std::optional<LogDecayFailure> failure;
};

DivisibilityReport verify_divisibility(const SeriesMatrix& e, const PrimeContext& ctx,
                                       const Scalar& alpha, const Scalar& beta);

} // namespace qconn
