#include "qconn/series_matrix.hpp"

namespace qconn {

SeriesMatrix SeriesMatrix::constant(const QMatrix& m, long order)
{
    if (m.rows() != m.cols()) throw Error(Errc::size_mismatch, "series matrix must be square");
    SeriesMatrix out(m.rows(), order);
    out.coeff_[0] = m;
    return out;
}

TruncatedSeries SeriesMatrix::entry(long i, long j) const
{
    TruncatedSeries s(order());
    for (long k = 0; k <= order(); ++k) s[k] = coeff(k).at(i, j);
    return s;
}

bool SeriesMatrix::is_zero() const
{
    for (const auto& m : coeff_)
        if (!m.is_zero()) return false;
    return true;
}

void SeriesMatrix::check_compatible(const SeriesMatrix& o) const
{
    if (size_ != o.size_) throw Error(Errc::size_mismatch, "series matrix sizes differ");
    if (coeff_.size() != o.coeff_.size())
        throw Error(Errc::order_mismatch, "series matrix orders differ");
}

SeriesMatrix SeriesMatrix::operator+(const SeriesMatrix& o) const
{
    check_compatible(o);
    SeriesMatrix out(size_, order());
    for (size_t k = 0; k < coeff_.size(); ++k) out.coeff_[k] = coeff_[k] + o.coeff_[k];
    return out;
}

SeriesMatrix SeriesMatrix::operator-(const SeriesMatrix& o) const
{
    check_compatible(o);
    SeriesMatrix out(size_, order());
    for (size_t k = 0; k < coeff_.size(); ++k) out.coeff_[k] = coeff_[k] - o.coeff_[k];
    return out;
}

SeriesMatrix SeriesMatrix::operator*(const SeriesMatrix& o) const
{
    check_compatible(o);
    SeriesMatrix out(size_, order());
    for (size_t i = 0; i < coeff_.size(); ++i) {
        if (coeff_[i].is_zero()) continue;
        for (size_t j = 0; i + j < coeff_.size(); ++j)
            out.coeff_[i + j] = out.coeff_[i + j] + coeff_[i] * o.coeff_[j];
    }
    return out;
}

SeriesMatrix SeriesMatrix::operator*(const Scalar& c) const
{
    SeriesMatrix out(size_, order());
    for (size_t k = 0; k < coeff_.size(); ++k) out.coeff_[k] = coeff_[k] * c;
    return out;
}

SeriesMatrix SeriesMatrix::transpose() const
{
    SeriesMatrix out(size_, order());
    for (size_t k = 0; k < coeff_.size(); ++k) out.coeff_[k] = coeff_[k].transpose();
    return out;
}

SeriesMatrix SeriesMatrix::tau2_d_tau() const
{
    SeriesMatrix out(size_, order());
    for (long k = 1; k <= order(); ++k)
        out.coeff(k) = coeff(k - 1) * Scalar(k - 1);
    return out;
}

ConnectionGerm::ConnectionGerm(long r, SignConvention conv, std::vector<QMatrix> displayed)
    : size(r), convention(conv), coeff(std::move(displayed))
{
    if (coeff.empty()) coeff.emplace_back(r, r);
    for (auto& m : coeff) {
        if (m.rows() != r || m.cols() != r)
            throw Error(Errc::size_mismatch, "connection coefficient is not r x r");
        if (conv == SignConvention::minus) m = -m;
    }
}

QMatrix ConnectionGerm::a(long k) const
{
    if (k < 0 || k >= static_cast<long>(coeff.size())) return QMatrix(size, size);
    return coeff[static_cast<size_t>(k)];
}

std::vector<QMatrix> ConnectionGerm::displayed_coeffs() const
{
    std::vector<QMatrix> out = coeff;
    if (convention == SignConvention::minus)
        for (auto& m : out) m = -m;
    return out;
}

SeriesMatrix covariant_derivative(const ConnectionGerm& conn, const SeriesMatrix& e)
{
    if (conn.size != e.size()) throw Error(Errc::size_mismatch, "connection/matrix size mismatch");
    long K = e.order();
    SeriesMatrix out = e.tau2_d_tau();
    for (long n = 0; n <= K; ++n) {
        QMatrix acc = out.coeff(n);
        long top = std::min<long>(n, conn.top_index());
        for (long i = 0; i <= top; ++i) {
            const QMatrix& ai = conn.coeff[static_cast<size_t>(i)];
            if (ai.is_zero()) continue;
            acc = acc + commutator(ai, e.coeff(n - i));
        }
        out.coeff(n) = acc;
    }
    return out;
}

SeriesMatrix series_matrix_inverse(const SeriesMatrix& g)
{
    long K = g.order();
    QMatrix g0_inv;
    try {
        g0_inv = g.coeff(0).inverse();
    } catch (const Error&) {
        throw Error(Errc::singular_leading_term, "constant term of the gauge is singular");
    }
    SeriesMatrix x = SeriesMatrix::constant(g0_inv, K);
    SeriesMatrix two_i = SeriesMatrix::identity(g.size(), K) * Scalar(2);
    for (long valid = 1; valid <= K; valid *= 2)
        x = x * (two_i - g * x);
    return x;
}

ConnectionGerm gauge_transform(const ConnectionGerm& conn, const SeriesMatrix& g, long order)
{
    if (conn.size != g.size()) throw Error(Errc::size_mismatch, "connection/gauge size mismatch");
    long K = std::max(order, g.order());
    SeriesMatrix gg(conn.size, K);
    for (long k = 0; k <= g.order() && k <= K; ++k) gg.coeff(k) = g.coeff(k);
    SeriesMatrix a(conn.size, K);
    for (long k = 0; k <= conn.top_index() && k <= K; ++k) a.coeff(k) = conn.coeff[static_cast<size_t>(k)];

    SeriesMatrix ginv = series_matrix_inverse(gg);
    SeriesMatrix b = ginv * a * gg + ginv * gg.tau2_d_tau();

    std::vector<QMatrix> coeffs;
    for (long k = 0; k <= order; ++k) coeffs.push_back(b.coeff(k));
    ConnectionGerm out(conn.size, SignConvention::plus, std::move(coeffs));
    return out;
}

} // namespace qconn
