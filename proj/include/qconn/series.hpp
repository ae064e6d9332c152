#pragma once

#include <vector>

#include "qconn/scalar.hpp"

namespace qconn {

/* Power series in tau truncated at a fixed inclusive order K: coefficients
   c_0..c_K, exact rationals. Arithmetic requires matching K. */
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    explicit TruncatedSeries(long order) : c_(static_cast<size_t>(order) + 1) {}
    TruncatedSeries(std::vector<Scalar> coeffs) : c_(std::move(coeffs))
    {
        if (c_.empty()) throw Error(Errc::precondition_violated, "series needs at least c_0");
    }

    static TruncatedSeries constant(const Scalar& value, long order)
    {
        TruncatedSeries s(order);
        s.c_[0] = value;
        return s;
    }

    long order() const { return static_cast<long>(c_.size()) - 1; }
    const Scalar& operator[](long k) const { return c_[static_cast<size_t>(k)]; }
    Scalar& operator[](long k) { return c_[static_cast<size_t>(k)]; }
    const std::vector<Scalar>& coeffs() const { return c_; }

    bool is_zero() const;
    bool operator==(const TruncatedSeries&) const = default;

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const Scalar& c) const;
    TruncatedSeries operator-() const;

    // tau d/dtau: c_k |-> k c_k, order unchanged
    TruncatedSeries tau_d_tau() const;
    // d/dtau: order drops by one
    TruncatedSeries d_tau() const;
    // multiply by tau: order grows by one
    TruncatedSeries mul_tau() const;
    // forget coefficients beyond new_order (new_order <= order)
    TruncatedSeries truncate(long new_order) const;

    std::string to_string() const; // "c0 + c1*tau + ..."

private:
    std::vector<Scalar> c_;
    void check_same_order(const TruncatedSeries& o) const;
};

} // namespace qconn
