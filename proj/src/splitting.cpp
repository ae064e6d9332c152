#include "qconn/splitting.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qconn {

namespace {

/* All positive divisors of |n| (n != 0), by trial division. Inputs here are
   constant terms of small characteristic polynomials. */
std::vector<Int> divisors(const Int& n)
{
    Int a = abs(n);
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= a; ++d) {
        if (a % d == 0) {
            small.push_back(d);
            if (d * d != a) large.push_back(a / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

Scalar eval_poly(const std::vector<Scalar>& c, const Scalar& x)
{
    Scalar acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// divide monic-or-not poly (ascending coeffs) by (x - root); exact
std::vector<Scalar> deflate(const std::vector<Scalar>& c, const Scalar& root)
{
    std::vector<Scalar> out(c.size() - 1);
    Scalar carry = c.back();
    for (size_t i = c.size() - 1; i-- > 0;) {
        out[i] = carry;
        carry = c[i] + carry * root;
    }
    // carry is the remainder, zero for an exact root
    return out;
}

std::string poly_to_string(const std::vector<Scalar>& c)
{
    std::ostringstream os;
    bool first = true;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        if (!first) os << " + ";
        os << scalar_to_string(c[i]);
        if (i > 0) os << "*x^" << i;
        first = false;
    }
    return first ? "0" : os.str();
}

/* Rational roots with multiplicities (rational root theorem + deflation).
   Returns the leftover factor, empty when the polynomial splits. */
std::map<Scalar, long> rational_roots(std::vector<Scalar> poly, std::vector<Scalar>* leftover)
{
    std::map<Scalar, long> roots;
    while (poly.size() > 1) {
        // strip x = 0 roots
        if (poly[0] == 0) {
            ++roots[Scalar(0)];
            poly.erase(poly.begin());
            continue;
        }
        // clear denominators to a primitive integer polynomial
        Int den = 1;
        for (const auto& c : poly) den = lcm(den, Int(c.get_den()));
        Int lead = Int(poly.back().get_num()) * den / Int(poly.back().get_den());
        Int cons = Int(poly.front().get_num()) * den / Int(poly.front().get_den());
        bool found = false;
        Scalar root;
        for (const Int& pn : divisors(cons)) {
            for (const Int& qd : divisors(lead)) {
                for (int s : {1, -1}) {
                    Scalar cand(s * pn, qd);
                    cand.canonicalize();
                    if (eval_poly(poly, cand) == 0) {
                        root = cand;
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) {
            if (leftover) *leftover = poly;
            return roots;
        }
        ++roots[root];
        poly = deflate(poly, root);
    }
    if (leftover) leftover->clear();
    return roots;
}

// e = g(A) * sum_t u_t (A - lambda)^t with u the Taylor inverse of g at lambda
QMatrix crt_projector(const QMatrix& a, const Scalar& lambda, long mult,
                      const std::map<Scalar, long>& roots)
{
    long n = a.rows();
    // g(lambda + s) as a polynomial in s, truncated at s^mult
    std::vector<Scalar> gs{Scalar(1)};
    for (const auto& [mu, mmu] : roots) {
        if (mu == lambda) continue;
        for (long rep = 0; rep < mmu; ++rep) {
            std::vector<Scalar> ng(std::min<size_t>(gs.size() + 1, static_cast<size_t>(mult)));
            for (size_t i = 0; i < gs.size(); ++i) {
                if (i < ng.size()) ng[i] += gs[i] * (lambda - mu);
                if (i + 1 < ng.size()) ng[i + 1] += gs[i];
            }
            gs = std::move(ng);
        }
    }
    // power-series inverse of gs mod s^mult
    std::vector<Scalar> inv(static_cast<size_t>(mult));
    inv[0] = Scalar(1) / gs[0];
    for (long k = 1; k < mult; ++k) {
        Scalar acc;
        for (long i = 1; i <= k; ++i)
            if (static_cast<size_t>(i) < gs.size()) acc += gs[static_cast<size_t>(i)] * inv[static_cast<size_t>(k - i)];
        inv[static_cast<size_t>(k)] = -acc / gs[0];
    }
    QMatrix ga = QMatrix::identity(n);
    for (const auto& [mu, mmu] : roots) {
        if (mu == lambda) continue;
        QMatrix shift = a - QMatrix::identity(n) * mu;
        for (long rep = 0; rep < mmu; ++rep) ga = ga * shift;
    }
    QMatrix s = QMatrix::zero(n), pw = QMatrix::identity(n);
    QMatrix shift = a - QMatrix::identity(n) * lambda;
    for (long t = 0; t < mult; ++t) {
        s = s + pw * inv[static_cast<size_t>(t)];
        pw = pw * shift;
    }
    return ga * s;
}

} // namespace

bool EigenData::all_differences_units() const
{
    return std::all_of(diff_vals.begin(), diff_vals.end(),
                       [](const EigenPairValuation& d) { return d.is_unit(); });
}

EigenData generalized_eigenprojectors(const QMatrix& a0, const PrimeContext& ctx)
{
    std::vector<Scalar> leftover;
    auto roots = rational_roots(a0.charpoly(), &leftover);
    if (!leftover.empty())
        throw Error(Errc::non_split_spectrum,
                    "characteristic polynomial has a factor without rational roots: " +
                        poly_to_string(leftover));

    EigenData eig;
    for (const auto& [lam, mult] : roots) {
        eig.eigenvalues.push_back(lam);
        eig.multiplicities.push_back(mult);
        eig.projectors.push_back(crt_projector(a0, lam, mult, roots));
    }
    long n = a0.rows();
    QMatrix sum = QMatrix::zero(n);
    for (size_t i = 0; i < eig.projectors.size(); ++i) {
        const QMatrix& e = eig.projectors[i];
        sum = sum + e;
        if (!(e * e == e)) throw Error(Errc::precondition_violated, "projector not idempotent");
        if (!commutator(e, a0).is_zero())
            throw Error(Errc::precondition_violated, "projector does not commute with A^0");
        for (size_t j = 0; j < i; ++j)
            if (!(eig.projectors[i] * eig.projectors[j]).is_zero())
                throw Error(Errc::precondition_violated, "projectors not orthogonal");
        eig.nilpotents.push_back((a0 - QMatrix::identity(n) * eig.eigenvalues[i]) * e);
    }
    if (!(sum == QMatrix::identity(n)))
        throw Error(Errc::precondition_violated, "projectors do not sum to the identity");

    for (size_t i = 0; i < eig.eigenvalues.size(); ++i)
        for (size_t j = i + 1; j < eig.eigenvalues.size(); ++j)
            eig.diff_vals.push_back({eig.eigenvalues[i], eig.eigenvalues[j],
                                     valuation(eig.eigenvalues[i] - eig.eigenvalues[j], ctx)});
    return eig;
}

SplittingResult block_split(const ConnectionGerm& conn, const PrimeContext& ctx, long order,
                            GaugeNormalization norm)
{
    long r = conn.size;
    long K = order;
    SplittingResult res;
    res.eigen = generalized_eigenprojectors(conn.a0(), ctx);
    const auto& eig = res.eigen;
    size_t nl = eig.eigenvalues.size();

    const QMatrix& a0 = conn.a0();
    std::vector<QMatrix> g(static_cast<size_t>(K) + 1, QMatrix::zero(r));
    std::vector<QMatrix> b(static_cast<size_t>(K) + 1, QMatrix::zero(r));
    g[0] = QMatrix::identity(r);
    b[0] = a0;

    for (long k = 1; k <= K; ++k) {
        // R^k = A^k + sum_{0<i<k} (A^i G^{k-i} - G^{k-i} B^i) + (k-1) G^{k-1}
        QMatrix rk = conn.a(k);
        for (long i = 1; i < k; ++i) {
            QMatrix ai = conn.a(i);
            if (!ai.is_zero()) rk = rk + ai * g[static_cast<size_t>(k - i)];
            rk = rk - g[static_cast<size_t>(k - i)] * b[static_cast<size_t>(i)];
        }
        rk = rk + g[static_cast<size_t>(k - 1)] * Scalar(k - 1);

        QMatrix gk = QMatrix::zero(r);
        for (size_t li = 0; li < nl; ++li) {
            for (size_t mi = 0; mi < nl; ++mi) {
                if (li == mi) {
                    if (norm == GaugeNormalization::seeded_diagonal)
                        gk = gk + eig.projectors[li] * Scalar(1, k + 1) +
                             eig.nilpotents[li] * Scalar(1, k);
                    continue;
                }
                // solve (lambda - mu) X + N_l X - X N_m = -R_block on the (l,m) block
                QMatrix rb = eig.projectors[li] * rk * eig.projectors[mi];
                Scalar d = eig.eigenvalues[li] - eig.eigenvalues[mi];
                QMatrix cur = -rb;
                QMatrix x = QMatrix::zero(r);
                Scalar dpow = d;
                int sign = 1;
                for (long step = 0; !cur.is_zero(); ++step) {
                    if (step > 2 * r + 2)
                        throw Error(Errc::precondition_violated, "Sylvester series did not terminate");
                    x = x + cur * (Scalar(sign) / dpow);
                    cur = eig.nilpotents[li] * cur - cur * eig.nilpotents[mi];
                    sign = -sign;
                    dpow *= d;
                }
                gk = gk + x;
            }
        }
        g[static_cast<size_t>(k)] = gk;
        b[static_cast<size_t>(k)] = commutator(a0, gk) + rk;
        for (size_t li = 0; li < nl; ++li)
            for (size_t mi = 0; mi < nl; ++mi)
                if (li != mi &&
                    !(eig.projectors[li] * b[static_cast<size_t>(k)] * eig.projectors[mi]).is_zero())
                    throw Error(Errc::precondition_violated, "off-diagonal block survived");
    }

    res.gauge = SeriesMatrix(r, K);
    for (long k = 0; k <= K; ++k) res.gauge.coeff(k) = g[static_cast<size_t>(k)];
    SeriesMatrix ginv = series_matrix_inverse(res.gauge);

    for (size_t li = 0; li < nl; ++li)
        res.projectors.push_back(res.gauge * SeriesMatrix::constant(eig.projectors[li], K) * ginv);

    // verify the splitting invariants exactly
    SeriesMatrix sum(r, K);
    for (size_t li = 0; li < nl; ++li) {
        const SeriesMatrix& e = res.projectors[li];
        sum = sum + e;
        if (!(e * e == e)) throw Error(Errc::precondition_violated, "E_lambda not idempotent");
        if (!covariant_derivative(conn, e).is_zero())
            throw Error(Errc::precondition_violated, "E_lambda not covariantly constant");
        for (size_t mi = 0; mi < li; ++mi)
            if (!(res.projectors[li] * res.projectors[mi]).is_zero())
                throw Error(Errc::precondition_violated, "E_lambda E_mu != 0");
    }
    if (!(sum == SeriesMatrix::identity(r, K)))
        throw Error(Errc::precondition_violated, "sum of projectors is not the identity");
    res.residual = K;
    return res;
}

namespace {

// column-major vec: L = k I + (I (x) A1 - A1^T (x) I) represents X -> kX + [A1, X]
QMatrix adjoint_operator(const QMatrix& a1, long k)
{
    long r = a1.rows();
    QMatrix l(r * r, r * r);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) {
            long col = j * r + i; // X_{ij}
            l.at(col, col) += Scalar(k);
            for (long t = 0; t < r; ++t) {
                l.at(j * r + t, col) += a1.at(t, i);  // (A1 X)_{tj}
                l.at(t * r + i, col) -= a1.at(j, t);  // (X A1)_{it}
            }
        }
    return l;
}

std::vector<Scalar> vec_cm(const QMatrix& m)
{
    long r = m.rows();
    std::vector<Scalar> v(static_cast<size_t>(r * r));
    for (long j = 0; j < r; ++j)
        for (long i = 0; i < r; ++i)
            v[static_cast<size_t>(j * r + i)] = m.at(i, j);
    return v;
}

QMatrix unvec_cm(const std::vector<Scalar>& v, long r)
{
    QMatrix m(r, r);
    for (long j = 0; j < r; ++j)
        for (long i = 0; i < r; ++i)
            m.at(i, j) = v[static_cast<size_t>(j * r + i)];
    return m;
}

} // namespace

ExtensionResult extend_endomorphism(const ConnectionGerm& conn, const QMatrix& e0, long order)
{
    long r = conn.size;
    if (e0.rows() != r || e0.cols() != r)
        throw Error(Errc::size_mismatch, "E^0 size mismatch");
    if (!conn.a0().is_zero())
        throw Error(Errc::precondition_violated, "extension requires a simple pole (A^0 = 0)");
    QMatrix a1 = conn.a(1);
    if (!commutator(a1, e0).is_zero())
        throw Error(Errc::precondition_violated, "[A^1, E^0] != 0");

    ExtensionResult out;
    out.series = SeriesMatrix(r, order);
    out.series.coeff(0) = e0;

    for (long k = 1; k <= order; ++k) {
        QMatrix rhs_m(r, r);
        for (long i = 2; i <= k + 1; ++i) {
            QMatrix ai = conn.a(i);
            if (ai.is_zero()) continue;
            rhs_m = rhs_m - commutator(ai, out.series.coeff(k + 1 - i));
        }
        QMatrix l = adjoint_operator(a1, k);
        auto sol = solve_linear(l, vec_cm(rhs_m));
        bool singular = !sol.kernel.empty();
        if (!sol.consistent) {
            out.report.status = ResonanceReport::Status::obstructed;
            out.report.order = k;
            out.report.obstruction = unvec_cm(sol.residual, r);
            out.report.kernel_dim = static_cast<long>(sol.kernel.size());
            for (const auto& v : sol.kernel) out.report.kernel.push_back(unvec_cm(v, r));
            // no E^k exists; the series stays zero from this order on
            return out;
        }
        out.series.coeff(k) = unvec_cm(sol.solution, r);
        if (singular && out.report.status == ResonanceReport::Status::unique) {
            out.report.status = ResonanceReport::Status::non_unique;
            out.report.order = k;
            out.report.kernel_dim = static_cast<long>(sol.kernel.size());
            for (const auto& v : sol.kernel) out.report.kernel.push_back(unvec_cm(v, r));
        }
    }
    return out;
}

DivisibilityReport verify_divisibility(const SeriesMatrix& e, const PrimeContext& ctx,
                                       const Scalar& alpha, const Scalar& beta)
{
    DivisibilityReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.p = ctx.p;
    rep.verified_up_to = e.order();
    for (long i = 0; i < e.size(); ++i)
        for (long j = 0; j < e.size(); ++j) {
            auto cert = check_log_decay(e.entry(i, j), ctx, alpha, beta);
            if (!cert.pass()) {
                rep.pass = false;
                rep.fail_row = i;
                rep.fail_col = j;
                rep.failure = cert.failure;
                return rep;
            }
        }
    return rep;
}

} // namespace qconn
