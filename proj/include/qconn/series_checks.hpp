#pragma once

#include <optional>

#include "qconn/series.hpp"

namespace qconn {

/* Newton polygon of a truncated series: the points (k, val_p(c_k)) for
   nonzero c_k, their lower convex hull, and a finite-window slope floor. */
struct NewtonPoint {
    long k;
    long val;
    bool operator==(const NewtonPoint&) const = default;
};

struct NewtonPolygonReport {
    std::vector<NewtonPoint> points; // nonzero coefficients only
    std::vector<NewtonPoint> hull;   // lower hull vertices, slopes strictly increasing
    long tail_start;                 // window [tail_start, K] used below
    std::optional<Scalar> min_slope_tail; // min val/k over the window (k > 0), if any point
};

/* window_start defaults to ceil(K/2); small-k coefficients are noisy. */
NewtonPolygonReport newton_polygon(const TruncatedSeries& a, const PrimeContext& ctx,
                                   std::optional<long> window_start = std::nullopt);

/* Same construction from precomputed (k, val) points sorted by k (used for
   the entrywise-minimum profile of a series matrix). */
NewtonPolygonReport newton_polygon_from_points(std::vector<NewtonPoint> points, long order,
                                               std::optional<long> window_start = std::nullopt);

/* Verdict for the log-decay condition of the ring R<<tau>>: for every m >= 1
   and every k <= K with k > alpha*p^m + beta, val_p(c_k) >= m. */
struct LogDecayFailure {
    long k;
    long m; // required divisibility that failed
    bool operator==(const LogDecayFailure&) const = default;
};

struct LogDecayCertificate {
    Scalar alpha, beta;
    long p = 0;
    long verified_up_to = 0;
    std::optional<LogDecayFailure> failure; // empty = pass up to K
    bool pass() const { return !failure.has_value(); }
};

LogDecayCertificate check_log_decay(const TruncatedSeries& a, const PrimeContext& ctx,
                                    const Scalar& alpha, const Scalar& beta);

/* Finite-window lower bound val_p(c_k) >= slope*k - gamma for k in [k_min, K]. */
struct SlopeFloorVerdict {
    Scalar slope, gamma;
    long k_min = 0;
    long verified_up_to = 0;
    std::optional<long> first_failure;
    bool pass() const { return !first_failure.has_value(); }
};

SlopeFloorVerdict slope_floor(const TruncatedSeries& a, const PrimeContext& ctx,
                              const Scalar& slope, const Scalar& gamma, long k_min);

/* Degree of the reduction mod p within the window [0, K]: the largest k with
   val_p(c_k) = 0, or -1 when the reduction is the zero polynomial.
   Requires every coefficient p-integral. */
struct ModPDegree {
    long degree = -1;
    long verified_up_to = 0;
};

ModPDegree mod_p_reduction_degree(const TruncatedSeries& a, const PrimeContext& ctx);

} // namespace qconn
