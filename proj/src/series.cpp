#include "qconn/series.hpp"

#include <sstream>

namespace qconn {

void TruncatedSeries::check_same_order(const TruncatedSeries& o) const
{
    if (c_.size() != o.c_.size())
        throw Error(Errc::order_mismatch,
                    "series orders differ: " + std::to_string(order()) + " vs " + std::to_string(o.order()));
}

bool TruncatedSeries::is_zero() const
{
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const
{
    check_same_order(o);
    TruncatedSeries out(order());
    for (size_t k = 0; k < c_.size(); ++k) out.c_[k] = c_[k] + o.c_[k];
    return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const
{
    check_same_order(o);
    TruncatedSeries out(order());
    for (size_t k = 0; k < c_.size(); ++k) out.c_[k] = c_[k] - o.c_[k];
    return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const
{
    check_same_order(o);
    TruncatedSeries out(order());
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; i + j < c_.size(); ++j)
            out.c_[i + j] += c_[i] * o.c_[j];
    }
    return out;
}

TruncatedSeries TruncatedSeries::operator*(const Scalar& c) const
{
    TruncatedSeries out(order());
    for (size_t k = 0; k < c_.size(); ++k) out.c_[k] = c_[k] * c;
    return out;
}

TruncatedSeries TruncatedSeries::operator-() const
{
    return *this * Scalar(-1);
}

TruncatedSeries TruncatedSeries::tau_d_tau() const
{
    TruncatedSeries out(order());
    for (size_t k = 1; k < c_.size(); ++k) out.c_[k] = c_[k] * Scalar(static_cast<long>(k));
    return out;
}

TruncatedSeries TruncatedSeries::d_tau() const
{
    if (order() == 0) return TruncatedSeries(0);
    TruncatedSeries out(order() - 1);
    for (size_t k = 1; k < c_.size(); ++k) out.c_[k - 1] = c_[k] * Scalar(static_cast<long>(k));
    return out;
}

TruncatedSeries TruncatedSeries::mul_tau() const
{
    TruncatedSeries out(order() + 1);
    for (size_t k = 0; k < c_.size(); ++k) out.c_[k + 1] = c_[k];
    return out;
}

TruncatedSeries TruncatedSeries::truncate(long new_order) const
{
    if (new_order > order())
        throw Error(Errc::order_mismatch, "truncate can only shorten a series");
    TruncatedSeries out(new_order);
    for (long k = 0; k <= new_order; ++k) out[k] = c_[static_cast<size_t>(k)];
    return out;
}

std::string TruncatedSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (!first) os << " + ";
        os << scalar_to_string(c_[k]);
        if (k > 0) os << "*tau^" << k;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace qconn
