#pragma once

#include <map>
#include <optional>

#include "qconn/snf.hpp"

namespace qconn {

/* Finite complex of free Z-modules, cohomologically graded; d raises degree. */
struct GradedComplex {
    std::map<long, long> dims; // degree -> rank, only nonzero entries
    std::map<long, IMatrix> d; // degree -> matrix V^deg -> V^{deg+1}

    long dim(long deg) const;
    IMatrix d_at(long deg) const; // zero matrix of the right shape if absent
    long total_dim() const;
    void validate() const; // shapes and d*d = 0
};

/* Complex with an order-p^m automorphism; sigma commutes with d. */
struct EquivariantComplex {
    long p = 2, m = 1;
    GradedComplex v;
    std::map<long, IMatrix> sigma;

    long group_order() const; // p^m
    IMatrix sigma_at(long deg) const;
    IMatrix norm_at(long deg) const; // 1 + sigma + ... + sigma^{p^m-1}
    void validate() const;

    static EquivariantComplex trivial(long p, long m); // R in degree 0
    static EquivariantComplex regular(long p, long m); // R[Gamma_m] in degree 0
    /* B^{(x) p^m} with the cyclic action moving factors to the left,
       sigma(x_1 (x) ... (x) x_n) = (-1)^{|x_1|(|x_2|+...+|x_n|)} x_2 (x) ... (x) x_1.
       Hard caps: total rank of B <= 3, p^m <= 9. */
    static EquivariantComplex tensor_power(const GradedComplex& b, long p, long m);
    static EquivariantComplex tensor(const EquivariantComplex& a, const EquivariantComplex& b);
};

/* Element of C^*(B Gamma_m; V), finitely supported over components
   t^i (x) V^{deg} and t^i theta (x) V^{deg}. The differential is
     d(t^i v)       = t^i dv + (-1)^{|v|} t^i theta (sigma - 1) v
     d(t^i theta v) = t^i theta dv + (-1)^{|v|} t^{i+1} N v
   which reproduces the two-periodic complex 0, p^m, 0, ... on trivial
   coefficients. */
struct CochainKey {
    long i = 0;
    bool theta = false;
    long vdeg = 0;
    auto operator<=>(const CochainKey&) const = default;
};

struct EquivariantCochain {
    long total_degree = 0;
    std::map<CochainKey, std::vector<Int>> parts; // 2i + theta + vdeg = total_degree

    void add_part(const CochainKey& key, std::vector<Int> vec);
    bool is_zero() const;
    bool operator==(const EquivariantCochain&) const = default;
    EquivariantCochain operator+(const EquivariantCochain& o) const;
    EquivariantCochain operator-(const EquivariantCochain& o) const;
    EquivariantCochain operator*(const Int& c) const;
};

EquivariantCochain differential(const EquivariantComplex& v, const EquivariantCochain& a);

/* Ordered basis of C^D(B Gamma_m; V); finite because i >= 0 and V is bounded. */
std::vector<CochainKey> cochain_components(const EquivariantComplex& v, long total_degree);
long cochain_dim(const EquivariantComplex& v, long total_degree);
std::vector<Int> cochain_to_vector(const EquivariantComplex& v, const EquivariantCochain& a);
IMatrix differential_matrix(const EquivariantComplex& v, long total_degree);

/* H^D(B Gamma_m; V) as a Z_p-module, by Smith normal form. */
ModuleDescription equivariant_cohomology_at(const EquivariantComplex& v, long total_degree);
std::vector<ModuleDescription> equivariant_cohomology(const EquivariantComplex& v, long deg_lo,
                                                      long deg_hi);

/* Chain-level cup product into the diagonal tensor complex:
     t^i v (x) t^j w         |-> t^{i+j} (v (x) w)
     t^i theta v (x) t^j w   |-> (-1)^{|w|} t^{i+j} theta (v (x) sigma w)
     t^i v (x) t^j theta w   |-> t^{i+j} theta (v (x) w)
     t^i theta v (x) t^j theta w |->
           (-1)^{|w|} sum_{0 <= r < s < p^m} t^{i+j+1} (sigma^r v (x) sigma^s w)
   On even-degree coefficients all signs are +1. */
EquivariantCochain coefficient_cup(const EquivariantComplex& v, const EquivariantComplex& w,
                                   const EquivariantCochain& a, const EquivariantCochain& b);

/* Restriction to the index-p subgroup, from level m+1 to level m:
   t^i v stays, t^i theta v picks up v + sigma v + ... + sigma^{p-1} v.
   `v_next` is the complex at level m+1; the returned cochain lives over the
   same module viewed at level m (sigma_m = sigma_{m+1}^p). */
EquivariantCochain restrict_level(const EquivariantComplex& v_next, const EquivariantCochain& a);
EquivariantComplex restricted_complex(const EquivariantComplex& v_next);

/* x - y = d(beta) solvable over Z_p? Both cochains of the same total degree. */
bool cohomologous(const EquivariantComplex& v, const EquivariantCochain& x,
                  const EquivariantCochain& y);

/* b^{(x)p^m} for an even-degree cocycle b in B^deg, as a cochain of total
   degree p^m * deg with the t^0 component only. */
EquivariantCochain tensor_power_class(const GradedComplex& b, long deg,
                                      const std::vector<Int>& bvec, long p, long m);
std::vector<Int> tensor_power_vector(const GradedComplex& b, long deg,
                                     const std::vector<Int>& bvec, long n);

/* ----- trivial-coefficient cochains of B Gamma_m (two-periodic) ----- */

struct BGammaCochain {
    long p = 2, m = 1;
    std::map<std::pair<long, bool>, Int> comp; // (i, theta) -> coefficient

    void add_term(long i, bool theta, const Int& c);
    bool is_zero() const;
    bool operator==(const BGammaCochain&) const = default;
    std::string to_string() const; // "3*t^2 + t^1*theta"
};

BGammaCochain bgamma_differential(const BGammaCochain& a);
BGammaCochain bgamma_cup(const BGammaCochain& a, const BGammaCochain& b);
BGammaCochain bgamma_restrict(const BGammaCochain& a_at_level_m_plus_1); // to level m
std::vector<ModuleDescription> bgamma_cohomology(long p, long m, long deg_lo, long deg_hi);

/* The compatible system Z/p^m <- Z/p^{m+1} <- ... in one even degree. */
struct TowerLevel {
    long m;
    ModuleDescription module;
    bool generator_maps_to_generator; // restriction sends [t^{deg/2}] to a generator
};

struct TowerReport {
    long p = 0, degree = 0;
    std::vector<TowerLevel> levels;
    bool compatible = true;
    std::string limit; // description of the inverse limit
};

TowerReport inverse_limit_tower(long p, long degree, long m_lo, long m_hi);

} // namespace qconn
