#include "qconn/snf.hpp"

#include <sstream>

namespace qconn {

IMatrix IMatrix::identity(long n)
{
    IMatrix m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool IMatrix::is_zero() const
{
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

IMatrix IMatrix::operator+(const IMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw Error(Errc::size_mismatch, "integer matrix shapes differ");
    IMatrix out(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + o.a_[i];
    return out;
}

IMatrix IMatrix::operator-(const IMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw Error(Errc::size_mismatch, "integer matrix shapes differ");
    IMatrix out(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
    return out;
}

IMatrix IMatrix::operator*(const IMatrix& o) const
{
    if (c_ != o.r_) throw Error(Errc::size_mismatch, "integer matrix product shape mismatch");
    IMatrix out(r_, o.c_);
    for (long i = 0; i < r_; ++i)
        for (long k = 0; k < c_; ++k) {
            const Int& x = at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < o.c_; ++j) out.at(i, j) += x * o.at(k, j);
        }
    return out;
}

IMatrix IMatrix::operator*(const Int& c) const
{
    IMatrix out(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * c;
    return out;
}

std::vector<Int> IMatrix::apply(const std::vector<Int>& v) const
{
    if (static_cast<long>(v.size()) != c_) throw Error(Errc::size_mismatch, "vector length mismatch");
    std::vector<Int> out(static_cast<size_t>(r_));
    for (long i = 0; i < r_; ++i) {
        Int acc = 0;
        for (long j = 0; j < c_; ++j)
            if (at(i, j) != 0) acc += at(i, j) * v[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

SmithForm smith_normal_form(const IMatrix& a)
{
    long rows = a.rows(), cols = a.cols();
    IMatrix d = a;
    SmithForm sf;
    sf.u = IMatrix::identity(rows);
    sf.v = IMatrix::identity(cols);

    auto row_swap = [&](long i, long j) {
        if (i == j) return;
        for (long t = 0; t < cols; ++t) swap(d.at(i, t), d.at(j, t));
        for (long t = 0; t < rows; ++t) swap(sf.u.at(i, t), sf.u.at(j, t));
    };
    auto col_swap = [&](long i, long j) {
        if (i == j) return;
        for (long t = 0; t < rows; ++t) swap(d.at(t, i), d.at(t, j));
        for (long t = 0; t < cols; ++t) swap(sf.v.at(t, i), sf.v.at(t, j));
    };
    auto row_addmul = [&](long dst, long src, const Int& f) { // row_dst += f*row_src
        for (long t = 0; t < cols; ++t) d.at(dst, t) += f * d.at(src, t);
        for (long t = 0; t < rows; ++t) sf.u.at(dst, t) += f * sf.u.at(src, t);
    };
    auto col_addmul = [&](long dst, long src, const Int& f) {
        for (long t = 0; t < rows; ++t) d.at(t, dst) += f * d.at(t, src);
        for (long t = 0; t < cols; ++t) sf.v.at(t, dst) += f * sf.v.at(t, src);
    };
    auto row_negate = [&](long i) {
        for (long t = 0; t < cols; ++t) d.at(i, t) = -d.at(i, t);
        for (long t = 0; t < rows; ++t) sf.u.at(i, t) = -sf.u.at(i, t);
    };

    long n = std::min(rows, cols);
    for (long t = 0; t < n; ++t) {
        // smallest nonzero |entry| in the remaining block as pivot
        long pi = -1, pj = -1;
        for (long i = t; i < rows; ++i)
            for (long j = t; j < cols; ++j) {
                if (d.at(i, j) == 0) continue;
                if (pi < 0 || mpz_cmpabs(d.at(i, j).get_mpz_t(), d.at(pi, pj).get_mpz_t()) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        row_swap(t, pi);
        col_swap(t, pj);

        for (bool dirty = true; dirty;) {
            dirty = false;
            for (long i = t + 1; i < rows; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
                row_addmul(i, t, -q);
                if (d.at(i, t) != 0) { row_swap(t, i); dirty = true; }
            }
            for (long j = t + 1; j < cols; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
                col_addmul(j, t, -q);
                if (d.at(t, j) != 0) { col_swap(t, j); dirty = true; }
            }
            if (!dirty) {
                // divisibility: pivot must divide every remaining entry
                for (long i = t + 1; i < rows && !dirty; ++i)
                    for (long j = t + 1; j < cols && !dirty; ++j)
                        if (d.at(i, j) % d.at(t, t) != 0) {
                            row_addmul(t, i, 1);
                            dirty = true;
                        }
            }
        }
        if (d.at(t, t) < 0) row_negate(t);
    }

    sf.divisors.resize(static_cast<size_t>(n));
    for (long t = 0; t < n; ++t) {
        sf.divisors[static_cast<size_t>(t)] = d.at(t, t);
        if (d.at(t, t) != 0) ++sf.rank;
    }
    return sf;
}

bool solvable_over_zp(const IMatrix& a, const std::vector<Int>& b, long p)
{
    if (static_cast<long>(b.size()) != a.rows())
        throw Error(Errc::size_mismatch, "rhs length mismatch");
    SmithForm sf = smith_normal_form(a);
    std::vector<Int> y = sf.u.apply(b);
    for (long i = 0; i < a.rows(); ++i) {
        const Int& yi = y[static_cast<size_t>(i)];
        if (i < sf.rank) {
            const Int& di = sf.divisors[static_cast<size_t>(i)];
            long need = int_valuation(di, p);
            if (need > 0 && yi != 0 && int_valuation(yi, p) < need) return false;
            if (need == 0) continue; // unit times a p-unit divisor: always solvable
        } else if (yi != 0) {
            return false;
        }
    }
    return true;
}

std::string ModuleDescription::to_string(long p) const
{
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " + ";
        first = false;
    };
    if (free_rank == 1) { sep(); os << "Z_p"; }
    else if (free_rank > 1) { sep(); os << "Z_p^" << free_rank; }
    for (long e : torsion_exponents) {
        sep();
        Int q;
        mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
        os << "Z/" << q.get_str();
    }
    if (first) os << "0";
    return os.str();
}

ModuleDescription cohomology_module(const IMatrix& d_in, const IMatrix& d_out, long p)
{
    if (d_in.rows() != d_out.cols())
        throw Error(Errc::size_mismatch, "complex shapes are inconsistent");
    SmithForm in = smith_normal_form(d_in);
    SmithForm out = smith_normal_form(d_out);
    ModuleDescription md;
    md.free_rank = d_in.rows() - in.rank - out.rank;
    for (long i = 0; i < in.rank; ++i) {
        long e = int_valuation(in.divisors[static_cast<size_t>(i)], p);
        if (e > 0) md.torsion_exponents.push_back(e);
    }
    std::sort(md.torsion_exponents.begin(), md.torsion_exponents.end());
    return md;
}

} // namespace qconn
