#pragma once

#include <optional>
#include <vector>

#include "qconn/scalar.hpp"

namespace qconn {

/* Dense matrix over Q. Row-major; all elimination is exact. */
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(long rows, long cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows * cols)) {}

    static QMatrix identity(long n);
    static QMatrix zero(long n) { return QMatrix(n, n); }

    long rows() const { return r_; }
    long cols() const { return c_; }
    const Scalar& at(long i, long j) const { return a_[static_cast<size_t>(i * c_ + j)]; }
    Scalar& at(long i, long j) { return a_[static_cast<size_t>(i * c_ + j)]; }

    bool is_zero() const;
    bool operator==(const QMatrix&) const = default;

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix operator*(const Scalar& c) const;
    QMatrix operator-() const { return *this * Scalar(-1); }

    QMatrix transpose() const;
    Scalar trace() const;
    QMatrix inverse() const; // throws Errc::singular_matrix

    // monic characteristic polynomial, coefficients ascending: c[0] + c[1] x + ... + x^n
    std::vector<Scalar> charpoly() const;

private:
    long r_ = 0, c_ = 0;
    std::vector<Scalar> a_;
    void check_same_shape(const QMatrix& o) const;
};

QMatrix commutator(const QMatrix& a, const QMatrix& b); // ab - ba

/* Exact solve of A x = b with deterministic pivoting.
   - solution: free variables set to zero (the minimal-support representative
     for the fixed column order) when the system is consistent
   - kernel: basis of ker A
   - residual: b - A x_hat where x_hat solves the maximal consistent
     subsystem; zero iff the system is consistent */
struct LinearSolveResult {
    bool consistent = false;
    std::vector<Scalar> solution; // valid when consistent
    std::vector<std::vector<Scalar>> kernel;
    std::vector<Scalar> residual; // zero vector when consistent
};

LinearSolveResult solve_linear(const QMatrix& a, const std::vector<Scalar>& b);

} // namespace qconn
