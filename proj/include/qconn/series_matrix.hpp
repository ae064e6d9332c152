#pragma once

#include "qconn/qmatrix.hpp"
#include "qconn/series.hpp"

namespace qconn {

/* r x r matrix of truncated series, stored as matrix coefficients
   E^0 + E^1 tau + ... + E^K tau^K. */
class SeriesMatrix {
public:
    SeriesMatrix() = default;
    SeriesMatrix(long size, long order)
        : size_(size), coeff_(static_cast<size_t>(order) + 1, QMatrix(size, size))
    {
    }

    static SeriesMatrix constant(const QMatrix& m, long order);
    static SeriesMatrix identity(long size, long order)
    {
        return constant(QMatrix::identity(size), order);
    }

    long size() const { return size_; }
    long order() const { return static_cast<long>(coeff_.size()) - 1; }
    const QMatrix& coeff(long k) const { return coeff_[static_cast<size_t>(k)]; }
    QMatrix& coeff(long k) { return coeff_[static_cast<size_t>(k)]; }

    TruncatedSeries entry(long i, long j) const;

    bool is_zero() const;
    bool operator==(const SeriesMatrix&) const = default;

    SeriesMatrix operator+(const SeriesMatrix& o) const;
    SeriesMatrix operator-(const SeriesMatrix& o) const;
    SeriesMatrix operator*(const SeriesMatrix& o) const; // truncated at K
    SeriesMatrix operator*(const Scalar& c) const;
    SeriesMatrix operator-() const { return *this * Scalar(-1); }
    SeriesMatrix transpose() const;

    // (tau^2 d/dtau) applied entrywise: coefficient k picks up (k-1) E^{k-1}
    SeriesMatrix tau2_d_tau() const;

private:
    long size_ = 0;
    std::vector<QMatrix> coeff_;
    void check_compatible(const SeriesMatrix& o) const;
};

/* Connection germ tau^2 d/dtau + A^0 + A^1 tau + ... with a finite list of
   coefficient matrices, zero beyond. Inputs written for the operator
   -tau^2 d/dtau + A are negated on ingestion; the flag records how the data
   was presented so reports and files can use the original convention. */
enum class SignConvention { plus, minus };

struct ConnectionGerm {
    long size = 0;
    SignConvention convention = SignConvention::plus;
    std::vector<QMatrix> coeff; // internal, plus-convention

    ConnectionGerm() = default;
    ConnectionGerm(long r, SignConvention conv, std::vector<QMatrix> displayed_coeffs);

    const QMatrix& a0() const { return coeff[0]; }
    QMatrix a(long k) const; // zero-extended access
    long top_index() const { return static_cast<long>(coeff.size()) - 1; }

    // coefficients in the convention the germ was presented in
    std::vector<QMatrix> displayed_coeffs() const;
};

/* [nabla, E] = tau^2 d/dtau E + [A, E], truncated at E's order. Zero iff E is
   covariantly constant to that order. */
SeriesMatrix covariant_derivative(const ConnectionGerm& conn, const SeriesMatrix& e);

/* Inverse of G with invertible constant term: invert G^0 exactly, then Newton
   iteration X <- X(2I - GX) on the tail (order doubles each step). */
SeriesMatrix series_matrix_inverse(const SeriesMatrix& g);

/* Change of trivialization: tau^2 d/dtau + G^{-1} A G + G^{-1}(tau^2 d/dtau G),
   truncated at `order`. */
ConnectionGerm gauge_transform(const ConnectionGerm& conn, const SeriesMatrix& g, long order);

} // namespace qconn
