#pragma once

#include <vector>

#include "qconn/scalar.hpp"

namespace qconn {

/* Dense matrix over Z. */
class IMatrix {
public:
    IMatrix() = default;
    IMatrix(long rows, long cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows * cols)) {}

    static IMatrix identity(long n);

    long rows() const { return r_; }
    long cols() const { return c_; }
    const Int& at(long i, long j) const { return a_[static_cast<size_t>(i * c_ + j)]; }
    Int& at(long i, long j) { return a_[static_cast<size_t>(i * c_ + j)]; }

    bool is_zero() const;
    bool operator==(const IMatrix&) const = default;

    IMatrix operator+(const IMatrix& o) const;
    IMatrix operator-(const IMatrix& o) const;
    IMatrix operator*(const IMatrix& o) const;
    IMatrix operator*(const Int& c) const;
    IMatrix operator-() const { return *this * Int(-1); }

    std::vector<Int> apply(const std::vector<Int>& v) const;

private:
    long r_ = 0, c_ = 0;
    std::vector<Int> a_;
};

/* Smith normal form U A V = D with U, V unimodular and D diagonal with
   d_1 | d_2 | ..., all d_i >= 0. */
struct SmithForm {
    std::vector<Int> divisors; // length min(rows, cols)
    IMatrix u, v;
    long rank = 0; // number of nonzero divisors
};

SmithForm smith_normal_form(const IMatrix& a);

/* Does a x = b admit a solution with x over Z_p? Decided from the Smith form:
   only the p-parts of the divisors obstruct, prime-to-p factors are units. */
bool solvable_over_zp(const IMatrix& a, const std::vector<Int>& b, long p);

/* Finitely generated Z_p-module: free part plus p-power torsion. */
struct ModuleDescription {
    long free_rank = 0;
    std::vector<long> torsion_exponents; // Z/p^e summands, ascending
    bool is_zero() const { return free_rank == 0 && torsion_exponents.empty(); }
    bool operator==(const ModuleDescription&) const = default;
    std::string to_string(long p) const;
};

/* Cohomology at one spot of d_in : A -> B, d_out : B -> C (with d_out d_in = 0),
   reported as a Z_p-module. */
ModuleDescription cohomology_module(const IMatrix& d_in, const IMatrix& d_out, long p);

} // namespace qconn
