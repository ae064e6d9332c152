#include "qconn/equivariant.hpp"

#include <algorithm>
#include <sstream>

namespace qconn {

long GradedComplex::dim(long deg) const
{
    auto it = dims.find(deg);
    return it == dims.end() ? 0 : it->second;
}

IMatrix GradedComplex::d_at(long deg) const
{
    auto it = d.find(deg);
    if (it != d.end()) return it->second;
    return IMatrix(dim(deg + 1), dim(deg));
}

long GradedComplex::total_dim() const
{
    long t = 0;
    for (const auto& [deg, n] : dims) t += n;
    return t;
}

void GradedComplex::validate() const
{
    for (const auto& [deg, n] : dims)
        if (n <= 0) throw Error(Errc::parse_error, "nonpositive rank in complex");
    for (const auto& [deg, m] : d) {
        if (m.cols() != dim(deg) || m.rows() != dim(deg + 1))
            throw Error(Errc::size_mismatch,
                        "differential at degree " + std::to_string(deg) + " has wrong shape");
        if (dim(deg + 2) > 0 && !(d_at(deg + 1) * m).is_zero())
            throw Error(Errc::precondition_violated,
                        "d^2 != 0 at degree " + std::to_string(deg));
    }
}

long EquivariantComplex::group_order() const
{
    long n = 1;
    for (long i = 0; i < m; ++i) n *= p;
    return n;
}

IMatrix EquivariantComplex::sigma_at(long deg) const
{
    auto it = sigma.find(deg);
    if (it != sigma.end()) return it->second;
    return IMatrix::identity(v.dim(deg));
}

IMatrix EquivariantComplex::norm_at(long deg) const
{
    long n = v.dim(deg);
    IMatrix s = sigma_at(deg);
    IMatrix acc(n, n), cur = IMatrix::identity(n);
    for (long k = 0; k < group_order(); ++k) {
        acc = acc + cur;
        cur = s * cur;
    }
    return acc;
}

void EquivariantComplex::validate() const
{
    v.validate();
    PrimeContext check_p(p); // ensures p is prime
    for (const auto& [deg, n] : v.dims) {
        IMatrix s = sigma_at(deg);
        if (s.rows() != n || s.cols() != n)
            throw Error(Errc::size_mismatch, "sigma has wrong shape at degree " + std::to_string(deg));
        IMatrix power = IMatrix::identity(n);
        for (long k = 0; k < group_order(); ++k) power = s * power;
        if (!(power == IMatrix::identity(n)))
            throw Error(Errc::precondition_violated,
                        "sigma^(p^m) != id at degree " + std::to_string(deg));
        if (v.dim(deg + 1) > 0 && !(v.d_at(deg) * s == sigma_at(deg + 1) * v.d_at(deg)))
            throw Error(Errc::precondition_violated,
                        "sigma does not commute with d at degree " + std::to_string(deg));
    }
}

EquivariantComplex EquivariantComplex::trivial(long p, long m)
{
    EquivariantComplex out;
    out.p = p;
    out.m = m;
    out.v.dims[0] = 1;
    return out;
}

EquivariantComplex EquivariantComplex::regular(long p, long m)
{
    EquivariantComplex out;
    out.p = p;
    out.m = m;
    long n = out.group_order();
    out.v.dims[0] = n;
    IMatrix s(n, n);
    for (long j = 0; j < n; ++j) s.at((j + 1) % n, j) = 1; // sigma * e_j = e_{j+1}
    out.sigma[0] = s;
    return out;
}

namespace {

/* Flattened basis of B across degrees, and tuple bookkeeping for tensor powers. */
struct TupleBasis {
    std::vector<long> fdeg;                // flattened basis degrees
    std::vector<std::pair<long, long>> fpos; // (degree, column within degree)
    std::map<long, std::vector<std::vector<int>>> tuples_by_degree;
    std::map<std::vector<int>, std::pair<long, long>> index; // tuple -> (degree, position)
};

TupleBasis enumerate_tuples(const GradedComplex& b, long n)
{
    TupleBasis tb;
    for (const auto& [deg, dim] : b.dims)
        for (long c = 0; c < dim; ++c) {
            tb.fdeg.push_back(deg);
            tb.fpos.push_back({deg, c});
        }
    long nb = static_cast<long>(tb.fdeg.size());
    std::vector<int> cur(static_cast<size_t>(n), 0);
    for (;;) {
        long total = 0;
        for (int t : cur) total += tb.fdeg[static_cast<size_t>(t)];
        auto& vec = tb.tuples_by_degree[total];
        tb.index[cur] = {total, static_cast<long>(vec.size())};
        vec.push_back(cur);
        long slot = n - 1;
        while (slot >= 0 && cur[static_cast<size_t>(slot)] == nb - 1) {
            cur[static_cast<size_t>(slot)] = 0;
            --slot;
        }
        if (slot < 0) break;
        ++cur[static_cast<size_t>(slot)];
    }
    return tb;
}

} // namespace

EquivariantComplex EquivariantComplex::tensor_power(const GradedComplex& b, long p, long m)
{
    EquivariantComplex out;
    out.p = p;
    out.m = m;
    long n = out.group_order();
    if (b.total_dim() > 3 || n > 9)
        throw Error(Errc::config_cap,
                    "tensor powers limited to total rank <= 3 and p^m <= 9");
    b.validate();

    TupleBasis tb = enumerate_tuples(b, n);
    for (const auto& [deg, tuples] : tb.tuples_by_degree)
        out.v.dims[deg] = static_cast<long>(tuples.size());

    // differential: sum over slots with Koszul signs from the degrees to the left
    for (const auto& [deg, tuples] : tb.tuples_by_degree) {
        if (out.v.dim(deg + 1) == 0) continue;
        IMatrix dm(out.v.dim(deg + 1), out.v.dim(deg));
        for (long col = 0; col < static_cast<long>(tuples.size()); ++col) {
            const auto& tup = tuples[static_cast<size_t>(col)];
            long sign_deg = 0;
            for (long slot = 0; slot < n; ++slot) {
                auto [fdeg, fcol] = tb.fpos[static_cast<size_t>(tup[static_cast<size_t>(slot)])];
                IMatrix db = b.d_at(fdeg);
                for (long row = 0; row < db.rows(); ++row) {
                    if (db.at(row, fcol) == 0) continue;
                    // replace the slot by the image basis vector
                    int repl = -1;
                    for (size_t f = 0; f < tb.fpos.size(); ++f)
                        if (tb.fpos[f] == std::make_pair(fdeg + 1, row)) repl = static_cast<int>(f);
                    std::vector<int> nt = tup;
                    nt[static_cast<size_t>(slot)] = repl;
                    auto [ndeg, npos] = tb.index.at(nt);
                    Int val = db.at(row, fcol);
                    if (sign_deg % 2) val = -val;
                    dm.at(npos, col) += val;
                }
                sign_deg += fdeg;
            }
        }
        out.v.d[deg] = dm;
    }

    // cyclic action moving factors to the left, with the Koszul sign of x_1
    for (const auto& [deg, tuples] : tb.tuples_by_degree) {
        IMatrix sm(out.v.dim(deg), out.v.dim(deg));
        for (long col = 0; col < static_cast<long>(tuples.size()); ++col) {
            const auto& tup = tuples[static_cast<size_t>(col)];
            std::vector<int> rot(tup.begin() + 1, tup.end());
            rot.push_back(tup[0]);
            long d1 = tb.fdeg[static_cast<size_t>(tup[0])];
            long rest = deg - d1;
            auto [ndeg, npos] = tb.index.at(rot);
            sm.at(npos, col) = (d1 % 2 && rest % 2) ? Int(-1) : Int(1);
        }
        out.sigma[deg] = sm;
    }
    out.validate();
    return out;
}

EquivariantComplex EquivariantComplex::tensor(const EquivariantComplex& a,
                                              const EquivariantComplex& b)
{
    if (a.p != b.p || a.m != b.m)
        throw Error(Errc::size_mismatch, "tensor of complexes over different groups");
    EquivariantComplex out;
    out.p = a.p;
    out.m = a.m;

    // basis of degree D: blocks (da asc) of pairs (ia, ib), row-major in ib
    auto pair_offset = [&](long D, long da) {
        long off = 0;
        for (const auto& [dd, na] : a.v.dims) {
            if (dd >= da) break;
            off += na * b.v.dim(D - dd);
        }
        return off;
    };
    std::map<long, long> dims;
    for (const auto& [da, na] : a.v.dims)
        for (const auto& [db, nb] : b.v.dims) dims[da + db] += na * nb;
    out.v.dims = dims;

    for (const auto& [D, dimD] : dims) {
        if (out.v.dim(D + 1) > 0) {
            IMatrix dm(out.v.dim(D + 1), dimD);
            for (const auto& [da, na] : a.v.dims) {
                long db = D - da, nb = b.v.dim(db);
                if (nb == 0) continue;
                long off = pair_offset(D, da);
                IMatrix dA = a.v.d_at(da), dB = b.v.d_at(db);
                for (long ia = 0; ia < na; ++ia)
                    for (long ib = 0; ib < nb; ++ib) {
                        long col = off + ia * nb + ib;
                        for (long r = 0; r < dA.rows(); ++r)
                            if (dA.at(r, ia) != 0)
                                dm.at(pair_offset(D + 1, da + 1) + r * nb + ib, col) += dA.at(r, ia);
                        for (long r = 0; r < dB.rows(); ++r)
                            if (dB.at(r, ib) != 0) {
                                Int val = dB.at(r, ib);
                                if (da % 2) val = -val;
                                dm.at(pair_offset(D + 1, da) + ia * b.v.dim(db + 1) + r, col) += val;
                            }
                    }
            }
            out.v.d[D] = dm;
        }
        IMatrix sm(dimD, dimD);
        for (const auto& [da, na] : a.v.dims) {
            long db = D - da, nb = b.v.dim(db);
            if (nb == 0) continue;
            long off = pair_offset(D, da);
            IMatrix sA = a.sigma_at(da), sB = b.sigma_at(db);
            for (long ia = 0; ia < na; ++ia)
                for (long ib = 0; ib < nb; ++ib)
                    for (long ra = 0; ra < na; ++ra) {
                        if (sA.at(ra, ia) == 0) continue;
                        for (long rb = 0; rb < nb; ++rb)
                            if (sB.at(rb, ib) != 0)
                                sm.at(off + ra * nb + rb, off + ia * nb + ib) +=
                                    sA.at(ra, ia) * sB.at(rb, ib);
                    }
        }
        out.sigma[D] = sm;
    }
    return out;
}

void EquivariantCochain::add_part(const CochainKey& key, std::vector<Int> vec)
{
    bool nonzero = std::any_of(vec.begin(), vec.end(), [](const Int& x) { return x != 0; });
    auto it = parts.find(key);
    if (it == parts.end()) {
        if (nonzero) parts.emplace(key, std::move(vec));
        return;
    }
    for (size_t t = 0; t < vec.size(); ++t) it->second[t] += vec[t];
    if (std::all_of(it->second.begin(), it->second.end(), [](const Int& x) { return x == 0; }))
        parts.erase(it);
}

bool EquivariantCochain::is_zero() const
{
    return parts.empty();
}

EquivariantCochain EquivariantCochain::operator+(const EquivariantCochain& o) const
{
    EquivariantCochain out = *this;
    for (const auto& [k, v] : o.parts) out.add_part(k, v);
    return out;
}

EquivariantCochain EquivariantCochain::operator-(const EquivariantCochain& o) const
{
    return *this + o * Int(-1);
}

EquivariantCochain EquivariantCochain::operator*(const Int& c) const
{
    EquivariantCochain out;
    out.total_degree = total_degree;
    if (c == 0) return out;
    for (const auto& [k, v] : parts) {
        std::vector<Int> nv = v;
        for (auto& x : nv) x *= c;
        out.parts.emplace(k, std::move(nv));
    }
    return out;
}

EquivariantCochain differential(const EquivariantComplex& v, const EquivariantCochain& a)
{
    EquivariantCochain out;
    out.total_degree = a.total_degree + 1;
    for (const auto& [key, vec] : a.parts) {
        long sign = (key.vdeg % 2) ? -1 : 1;
        IMatrix dv = v.v.d_at(key.vdeg);
        if (dv.rows() > 0) {
            auto img = dv.apply(vec);
            out.add_part({key.i, key.theta, key.vdeg + 1}, std::move(img));
        }
        if (!key.theta) {
            IMatrix s = v.sigma_at(key.vdeg);
            auto img = s.apply(vec);
            for (size_t t = 0; t < vec.size(); ++t) img[t] = Int(sign) * (img[t] - vec[t]);
            out.add_part({key.i, true, key.vdeg}, std::move(img));
        } else {
            auto img = v.norm_at(key.vdeg).apply(vec);
            for (auto& x : img) x *= sign;
            out.add_part({key.i + 1, false, key.vdeg}, std::move(img));
        }
    }
    return out;
}

std::vector<CochainKey> cochain_components(const EquivariantComplex& v, long total_degree)
{
    std::vector<CochainKey> keys;
    if (v.v.dims.empty()) return keys;
    long min_deg = v.v.dims.begin()->first;
    for (long i = 0; 2 * i + min_deg <= total_degree; ++i) {
        if (v.v.dim(total_degree - 2 * i) > 0) keys.push_back({i, false, total_degree - 2 * i});
        if (v.v.dim(total_degree - 2 * i - 1) > 0) keys.push_back({i, true, total_degree - 2 * i - 1});
    }
    return keys;
}

long cochain_dim(const EquivariantComplex& v, long total_degree)
{
    long n = 0;
    for (const auto& k : cochain_components(v, total_degree)) n += v.v.dim(k.vdeg);
    return n;
}

std::vector<Int> cochain_to_vector(const EquivariantComplex& v, const EquivariantCochain& a)
{
    std::vector<Int> out(static_cast<size_t>(cochain_dim(v, a.total_degree)));
    long off = 0;
    for (const auto& key : cochain_components(v, a.total_degree)) {
        auto it = a.parts.find(key);
        if (it != a.parts.end())
            for (size_t t = 0; t < it->second.size(); ++t)
                out[static_cast<size_t>(off) + t] = it->second[t];
        off += v.v.dim(key.vdeg);
    }
    return out;
}

IMatrix differential_matrix(const EquivariantComplex& v, long total_degree)
{
    IMatrix out(cochain_dim(v, total_degree + 1), cochain_dim(v, total_degree));
    long col = 0;
    for (const auto& key : cochain_components(v, total_degree)) {
        long n = v.v.dim(key.vdeg);
        for (long t = 0; t < n; ++t) {
            EquivariantCochain basis;
            basis.total_degree = total_degree;
            std::vector<Int> e(static_cast<size_t>(n));
            e[static_cast<size_t>(t)] = 1;
            basis.parts.emplace(key, std::move(e));
            auto img = cochain_to_vector(v, differential(v, basis));
            for (size_t r = 0; r < img.size(); ++r) out.at(static_cast<long>(r), col) = img[r];
            ++col;
        }
    }
    return out;
}

ModuleDescription equivariant_cohomology_at(const EquivariantComplex& v, long total_degree)
{
    return cohomology_module(differential_matrix(v, total_degree - 1),
                             differential_matrix(v, total_degree), v.p);
}

std::vector<ModuleDescription> equivariant_cohomology(const EquivariantComplex& v, long deg_lo,
                                                      long deg_hi)
{
    if (deg_lo > deg_hi) throw Error(Errc::window_too_narrow, "empty degree window");
    std::vector<ModuleDescription> out;
    for (long d = deg_lo; d <= deg_hi; ++d) out.push_back(equivariant_cohomology_at(v, d));
    return out;
}

namespace {

std::vector<Int> sigma_power(const EquivariantComplex& v, long deg, const std::vector<Int>& x,
                             long k)
{
    std::vector<Int> out = x;
    IMatrix s = v.sigma_at(deg);
    for (long t = 0; t < k; ++t) out = s.apply(out);
    return out;
}

std::vector<Int> tensor_vecs(const std::vector<Int>& x, const std::vector<Int>& y)
{
    std::vector<Int> out(x.size() * y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = x[i] * y[j];
    }
    return out;
}

/* position block of (dv (x) dw) pairs inside the tensor complex at degree dv+dw */
long tensor_offset(const EquivariantComplex& a, const EquivariantComplex& b, long D, long da)
{
    long off = 0;
    for (const auto& [dd, na] : a.v.dims) {
        if (dd >= da) break;
        off += na * b.v.dim(D - dd);
    }
    return off;
}

} // namespace

EquivariantCochain coefficient_cup(const EquivariantComplex& v, const EquivariantComplex& w,
                                   const EquivariantCochain& a, const EquivariantCochain& b)
{
    if (v.p != w.p || v.m != w.m)
        throw Error(Errc::size_mismatch, "cup of cochains over different groups");
    EquivariantCochain out;
    out.total_degree = a.total_degree + b.total_degree;
    long n = v.group_order();

    for (const auto& [ka, va] : a.parts) {
        for (const auto& [kb, wb] : b.parts) {
            long D = ka.vdeg + kb.vdeg;
            long off = tensor_offset(v, w, D, ka.vdeg);
            Int sgn = (kb.vdeg % 2) ? -1 : 1;
            auto place = [&](long i, bool theta, const std::vector<Int>& x,
                             const std::vector<Int>& y, const Int& factor) {
                auto t = tensor_vecs(x, y);
                std::vector<Int> padded(static_cast<size_t>(off), Int(0));
                padded.insert(padded.end(), t.begin(), t.end());
                long full = 0;
                for (const auto& [dd, na] : v.v.dims) full += na * w.v.dim(D - dd);
                padded.resize(static_cast<size_t>(full));
                for (auto& z : padded) z *= factor;
                EquivariantCochain piece;
                piece.total_degree = out.total_degree;
                piece.parts.emplace(CochainKey{i, theta, D}, std::move(padded));
                out = out + piece;
            };
            if (!ka.theta && !kb.theta) {
                place(ka.i + kb.i, false, va, wb, 1);
            } else if (ka.theta && !kb.theta) {
                place(ka.i + kb.i, true, va, w.sigma_at(kb.vdeg).apply(wb), sgn);
            } else if (!ka.theta && kb.theta) {
                place(ka.i + kb.i, true, va, wb, 1);
            } else {
                for (long r = 0; r < n; ++r) {
                    auto xr = sigma_power(v, ka.vdeg, va, r);
                    for (long s = r + 1; s < n; ++s)
                        place(ka.i + kb.i + 1, false, xr, sigma_power(w, kb.vdeg, wb, s), sgn);
                }
            }
        }
    }
    return out;
}

EquivariantComplex restricted_complex(const EquivariantComplex& v_next)
{
    EquivariantComplex out = v_next;
    out.m = v_next.m - 1;
    if (out.m < 0) throw Error(Errc::precondition_violated, "no level below m = 0");
    for (auto& [deg, s] : out.sigma) {
        IMatrix sp = IMatrix::identity(v_next.v.dim(deg));
        for (long t = 0; t < v_next.p; ++t) sp = s * sp;
        s = sp;
    }
    return out;
}

EquivariantCochain restrict_level(const EquivariantComplex& v_next, const EquivariantCochain& a)
{
    EquivariantCochain out;
    out.total_degree = a.total_degree;
    for (const auto& [key, vec] : a.parts) {
        if (!key.theta) {
            out.add_part(key, vec);
        } else {
            std::vector<Int> acc(vec.size());
            std::vector<Int> cur = vec;
            IMatrix s = v_next.sigma_at(key.vdeg);
            for (long t = 0; t < v_next.p; ++t) {
                for (size_t z = 0; z < vec.size(); ++z) acc[z] += cur[z];
                cur = s.apply(cur);
            }
            out.add_part(key, std::move(acc));
        }
    }
    return out;
}

bool cohomologous(const EquivariantComplex& v, const EquivariantCochain& x,
                  const EquivariantCochain& y)
{
    if (x.total_degree != y.total_degree)
        throw Error(Errc::size_mismatch, "cochains of different degrees");
    EquivariantCochain z = x - y;
    return solvable_over_zp(differential_matrix(v, x.total_degree - 1), cochain_to_vector(v, z),
                            v.p);
}

std::vector<Int> tensor_power_vector(const GradedComplex& b, long deg,
                                     const std::vector<Int>& bvec, long n)
{
    TupleBasis tb = enumerate_tuples(b, n);
    auto it = tb.tuples_by_degree.find(n * deg);
    if (it == tb.tuples_by_degree.end())
        throw Error(Errc::empty_slice, "tensor power degree is empty");
    std::vector<Int> out(it->second.size());
    for (size_t pos = 0; pos < it->second.size(); ++pos) {
        Int prod = 1;
        bool ok = true;
        for (int f : it->second[pos]) {
            auto [fdeg, fcol] = tb.fpos[static_cast<size_t>(f)];
            if (fdeg != deg) { ok = false; break; }
            prod *= bvec[static_cast<size_t>(fcol)];
        }
        out[pos] = ok ? prod : Int(0);
    }
    return out;
}

EquivariantCochain tensor_power_class(const GradedComplex& b, long deg,
                                      const std::vector<Int>& bvec, long p, long m)
{
    if (deg % 2 != 0) throw Error(Errc::odd_degree, "tensor power class needs even degree");
    if (static_cast<long>(bvec.size()) != b.dim(deg))
        throw Error(Errc::size_mismatch, "cocycle vector has wrong length");
    std::vector<Int> img = b.d_at(deg).apply(bvec);
    if (std::any_of(img.begin(), img.end(), [](const Int& x) { return x != 0; }))
        throw Error(Errc::not_a_cocycle, "input is not a cocycle");

    EquivariantComplex v = EquivariantComplex::tensor_power(b, p, m);
    long n = v.group_order();
    EquivariantCochain out;
    out.total_degree = n * deg;
    out.add_part({0, false, n * deg}, tensor_power_vector(b, deg, bvec, n));
    return out;
}

/* ----- trivial coefficients ----- */

void BGammaCochain::add_term(long i, bool theta, const Int& c)
{
    if (c == 0) return;
    auto key = std::make_pair(i, theta);
    auto it = comp.find(key);
    if (it == comp.end()) {
        comp.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second == 0) comp.erase(it);
}

bool BGammaCochain::is_zero() const
{
    return comp.empty();
}

std::string BGammaCochain::to_string() const
{
    if (comp.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : comp) {
        if (!first) os << " + ";
        first = false;
        if (c != 1) os << c.get_str() << "*";
        os << "t^" << key.first;
        if (key.second) os << "*theta";
    }
    return os.str();
}

BGammaCochain bgamma_differential(const BGammaCochain& a)
{
    BGammaCochain out;
    out.p = a.p;
    out.m = a.m;
    Int pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(a.p), static_cast<unsigned long>(a.m));
    for (const auto& [key, c] : a.comp)
        if (key.second) out.add_term(key.first + 1, false, pm * c);
    return out;
}

BGammaCochain bgamma_cup(const BGammaCochain& a, const BGammaCochain& b)
{
    if (a.p != b.p || a.m != b.m)
        throw Error(Errc::size_mismatch, "cup of cochains over different groups");
    BGammaCochain out;
    out.p = a.p;
    out.m = a.m;
    Int pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(a.p), static_cast<unsigned long>(a.m));
    Int theta_theta = pm * (pm - 1) / 2;
    for (const auto& [ka, ca] : a.comp)
        for (const auto& [kb, cb] : b.comp) {
            if (!ka.second || !kb.second)
                out.add_term(ka.first + kb.first, ka.second || kb.second, ca * cb);
            else
                out.add_term(ka.first + kb.first + 1, false, ca * cb * theta_theta);
        }
    return out;
}

BGammaCochain bgamma_restrict(const BGammaCochain& a)
{
    BGammaCochain out;
    out.p = a.p;
    out.m = a.m - 1;
    if (out.m < 0) throw Error(Errc::precondition_violated, "no level below m = 0");
    for (const auto& [key, c] : a.comp)
        out.add_term(key.first, key.second, key.second ? Int(a.p) * c : c);
    return out;
}

std::vector<ModuleDescription> bgamma_cohomology(long p, long m, long deg_lo, long deg_hi)
{
    return equivariant_cohomology(EquivariantComplex::trivial(p, m), deg_lo, deg_hi);
}

TowerReport inverse_limit_tower(long p, long degree, long m_lo, long m_hi)
{
    if (m_lo < 1 || m_lo > m_hi) throw Error(Errc::window_too_narrow, "bad m range");
    TowerReport rep;
    rep.p = p;
    rep.degree = degree;
    bool nontrivial = degree > 0 && degree % 2 == 0;
    for (long m = m_lo; m <= m_hi; ++m) {
        TowerLevel lvl;
        lvl.m = m;
        lvl.module = bgamma_cohomology(p, m, degree, degree).front();
        lvl.generator_maps_to_generator = true;
        if (m < m_hi && nontrivial) {
            // restrict the generator cocycle t^{degree/2} from level m+1
            BGammaCochain gen;
            gen.p = p;
            gen.m = m + 1;
            gen.add_term(degree / 2, false, 1);
            BGammaCochain res = bgamma_restrict(gen);
            // its class generates H^degree(B Gamma_m) iff the coefficient is a p-unit
            auto it = res.comp.find({degree / 2, false});
            lvl.generator_maps_to_generator =
                it != res.comp.end() && int_valuation(it->second, p) == 0;
            if (!lvl.generator_maps_to_generator) rep.compatible = false;
        }
        rep.levels.push_back(lvl);
    }
    if (degree == 0)
        rep.limit = "Z_p (constant tower, free rank 1)";
    else if (nontrivial)
        rep.limit = "Z_p (inverse limit of Z/p^m along quotient maps)";
    else
        rep.limit = "0";
    return rep;
}

} // namespace qconn
