#include "qconn/qmatrix.hpp"

namespace qconn {

QMatrix QMatrix::identity(long n)
{
    QMatrix m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool QMatrix::is_zero() const
{
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

void QMatrix::check_same_shape(const QMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_)
        throw Error(Errc::size_mismatch, "matrix shapes differ");
}

QMatrix QMatrix::operator+(const QMatrix& o) const
{
    check_same_shape(o);
    QMatrix out(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + o.a_[i];
    return out;
}

QMatrix QMatrix::operator-(const QMatrix& o) const
{
    check_same_shape(o);
    QMatrix out(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
    return out;
}

QMatrix QMatrix::operator*(const QMatrix& o) const
{
    if (c_ != o.r_) throw Error(Errc::size_mismatch, "matrix product shape mismatch");
    QMatrix out(r_, o.c_);
    for (long i = 0; i < r_; ++i)
        for (long k = 0; k < c_; ++k) {
            const Scalar& x = at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < o.c_; ++j)
                out.at(i, j) += x * o.at(k, j);
        }
    return out;
}

QMatrix QMatrix::operator*(const Scalar& c) const
{
    QMatrix out(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * c;
    return out;
}

QMatrix QMatrix::transpose() const
{
    QMatrix out(c_, r_);
    for (long i = 0; i < r_; ++i)
        for (long j = 0; j < c_; ++j)
            out.at(j, i) = at(i, j);
    return out;
}

Scalar QMatrix::trace() const
{
    Scalar t;
    for (long i = 0; i < r_ && i < c_; ++i) t += at(i, i);
    return t;
}

QMatrix QMatrix::inverse() const
{
    if (r_ != c_) throw Error(Errc::size_mismatch, "inverse of a non-square matrix");
    long n = r_;
    QMatrix m = *this, inv = identity(n);
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long i = col; i < n; ++i)
            if (m.at(i, col) != 0) { piv = i; break; }
        if (piv < 0) throw Error(Errc::singular_matrix, "matrix is singular");
        if (piv != col)
            for (long j = 0; j < n; ++j) {
                swap(m.at(piv, j), m.at(col, j));
                swap(inv.at(piv, j), inv.at(col, j));
            }
        Scalar d = m.at(col, col);
        for (long j = 0; j < n; ++j) {
            m.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (long i = 0; i < n; ++i) {
            if (i == col || m.at(i, col) == 0) continue;
            Scalar f = m.at(i, col);
            for (long j = 0; j < n; ++j) {
                m.at(i, j) -= f * m.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

std::vector<Scalar> QMatrix::charpoly() const
{
    if (r_ != c_) throw Error(Errc::size_mismatch, "charpoly of a non-square matrix");
    long n = r_;
    // Faddeev-LeVerrier: M_0 = I, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_{k-1} ...)/k
    std::vector<Scalar> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = 1;
    QMatrix m = identity(n);
    for (long k = 1; k <= n; ++k) {
        QMatrix am = *this * m;
        Scalar ck = -am.trace() / Scalar(k);
        c[static_cast<size_t>(n - k)] = ck;
        m = am;
        for (long i = 0; i < n; ++i) m.at(i, i) += ck;
    }
    return c;
}

QMatrix commutator(const QMatrix& a, const QMatrix& b)
{
    return a * b - b * a;
}

LinearSolveResult solve_linear(const QMatrix& a, const std::vector<Scalar>& b)
{
    if (static_cast<long>(b.size()) != a.rows())
        throw Error(Errc::size_mismatch, "rhs length mismatch");
    long rows = a.rows(), cols = a.cols();
    QMatrix m(rows, cols + 1);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) m.at(i, j) = a.at(i, j);
        m.at(i, cols) = b[static_cast<size_t>(i)];
    }

    // row echelon over the coefficient columns only
    std::vector<long> pivot_col;
    long row = 0;
    for (long col = 0; col < cols && row < rows; ++col) {
        long piv = -1;
        for (long i = row; i < rows; ++i)
            if (m.at(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (long j = 0; j <= cols; ++j) swap(m.at(piv, j), m.at(row, j));
        Scalar d = m.at(row, col);
        for (long j = col; j <= cols; ++j) m.at(row, j) /= d;
        for (long i = 0; i < rows; ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            Scalar f = m.at(i, col);
            for (long j = col; j <= cols; ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }

    LinearSolveResult out;
    out.consistent = true;
    for (long i = row; i < rows; ++i)
        if (m.at(i, cols) != 0) out.consistent = false;

    // particular solution of the consistent subsystem, free variables zero
    std::vector<Scalar> x(static_cast<size_t>(cols));
    for (size_t r = 0; r < pivot_col.size(); ++r)
        x[static_cast<size_t>(pivot_col[r])] = m.at(static_cast<long>(r), cols);
    if (out.consistent) out.solution = x;

    // residual b - A x_hat (zero iff consistent)
    out.residual.assign(static_cast<size_t>(rows), Scalar(0));
    for (long i = 0; i < rows; ++i) {
        Scalar acc = b[static_cast<size_t>(i)];
        for (long j = 0; j < cols; ++j)
            if (x[static_cast<size_t>(j)] != 0) acc -= a.at(i, j) * x[static_cast<size_t>(j)];
        out.residual[static_cast<size_t>(i)] = acc;
    }

    // kernel basis: one vector per free column
    std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
    for (long pc : pivot_col) is_pivot[static_cast<size_t>(pc)] = true;
    for (long fc = 0; fc < cols; ++fc) {
        if (is_pivot[static_cast<size_t>(fc)]) continue;
        std::vector<Scalar> v(static_cast<size_t>(cols));
        v[static_cast<size_t>(fc)] = 1;
        for (size_t r = 0; r < pivot_col.size(); ++r)
            v[static_cast<size_t>(pivot_col[r])] = -m.at(static_cast<long>(r), fc);
        out.kernel.push_back(std::move(v));
    }
    return out;
}

} // namespace qconn
