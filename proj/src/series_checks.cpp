#include "qconn/series_checks.hpp"

namespace qconn {

NewtonPolygonReport newton_polygon_from_points(std::vector<NewtonPoint> points, long order,
                                               std::optional<long> window_start)
{
    if (points.empty())
        throw Error(Errc::zero_series, "newton polygon of the zero series");

    NewtonPolygonReport rep;
    rep.points = std::move(points);

    // lower hull, monotone chain; pop unless the turn is strictly convex
    for (const auto& pt : rep.points) {
        auto& h = rep.hull;
        while (h.size() >= 2) {
            const auto& o = h[h.size() - 2];
            const auto& q = h[h.size() - 1];
            Int cross = Int(q.k - o.k) * Int(pt.val - o.val) - Int(q.val - o.val) * Int(pt.k - o.k);
            if (cross > 0) break;
            h.pop_back();
        }
        h.push_back(pt);
    }

    rep.tail_start = window_start.value_or((order + 1) / 2);
    for (const auto& pt : rep.points) {
        if (pt.k < rep.tail_start || pt.k == 0) continue;
        Scalar slope(pt.val, pt.k);
        slope.canonicalize();
        if (!rep.min_slope_tail || slope < *rep.min_slope_tail) rep.min_slope_tail = slope;
    }
    return rep;
}

NewtonPolygonReport newton_polygon(const TruncatedSeries& a, const PrimeContext& ctx,
                                   std::optional<long> window_start)
{
    std::vector<NewtonPoint> points;
    for (long k = 0; k <= a.order(); ++k) {
        if (a[k] == 0) continue;
        points.push_back({k, valuation(a[k], ctx).v});
    }
    return newton_polygon_from_points(std::move(points), a.order(), window_start);
}

LogDecayCertificate check_log_decay(const TruncatedSeries& a, const PrimeContext& ctx,
                                    const Scalar& alpha, const Scalar& beta)
{
    LogDecayCertificate cert;
    cert.alpha = alpha;
    cert.beta = beta;
    cert.p = ctx.p;
    cert.verified_up_to = a.order();
    for (long k = 0; k <= a.order(); ++k) {
        if (a[k] == 0) continue;
        if (alpha == 0) {
            // degenerate case: the series must be a polynomial of degree <= beta
            if (beta < Scalar(k)) {
                cert.failure = LogDecayFailure{k, valuation(a[k], ctx).v + 1};
                return cert;
            }
            continue;
        }
        // largest m >= 0 with alpha*p^m + beta < k
        long m = 0;
        Scalar pw(ctx.p);
        while (alpha * pw + beta < Scalar(k)) {
            ++m;
            pw *= ctx.p;
        }
        if (m == 0) continue;
        if (!valuation(a[k], ctx).at_least(m)) {
            cert.failure = LogDecayFailure{k, m};
            return cert;
        }
    }
    return cert;
}

SlopeFloorVerdict slope_floor(const TruncatedSeries& a, const PrimeContext& ctx,
                              const Scalar& slope, const Scalar& gamma, long k_min)
{
    if (k_min > a.order())
        throw Error(Errc::precondition_violated, "k_min beyond truncation order");
    SlopeFloorVerdict v;
    v.slope = slope;
    v.gamma = gamma;
    v.k_min = k_min;
    v.verified_up_to = a.order();
    for (long k = k_min; k <= a.order(); ++k) {
        if (a[k] == 0) continue;
        Scalar bound = slope * Scalar(k) - gamma;
        if (Scalar(valuation(a[k], ctx).v) < bound) {
            v.first_failure = k;
            return v;
        }
    }
    return v;
}

ModPDegree mod_p_reduction_degree(const TruncatedSeries& a, const PrimeContext& ctx)
{
    ModPDegree out;
    out.verified_up_to = a.order();
    for (long k = 0; k <= a.order(); ++k) {
        if (a[k] == 0) continue;
        Valuation v = valuation(a[k], ctx);
        if (v.v < 0)
            throw Error(Errc::non_integral,
                        "coefficient of tau^" + std::to_string(k) + " is not p-integral");
        if (v.v == 0) out.degree = k;
    }
    return out;
}

} // namespace qconn
