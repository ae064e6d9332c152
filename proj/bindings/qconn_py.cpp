#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "qconn/equivariant.hpp"
#include "qconn/io.hpp"
#include "qconn/splitting.hpp"
#include "qconn/version.hpp"

namespace py = pybind11;
using namespace qconn;

namespace {

/* Scalars cross the boundary as strings ("a" or "a/b"); callers convert to
   Fraction on the python side. */

Scalar sc(const std::string& s) { return scalar_from_string(s); }

std::vector<std::string> series_out(const TruncatedSeries& s)
{
    std::vector<std::string> out;
    for (long k = 0; k <= s.order(); ++k) out.push_back(scalar_to_string(s[k]));
    return out;
}

TruncatedSeries series_in(const std::vector<std::string>& coeffs)
{
    std::vector<Scalar> c;
    for (const auto& x : coeffs) c.push_back(sc(x));
    return TruncatedSeries(std::move(c));
}

QMatrix matrix_in(const std::vector<std::vector<std::string>>& rows)
{
    if (rows.empty()) throw Error(Errc::size_mismatch, "empty matrix");
    QMatrix m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw Error(Errc::size_mismatch, "ragged matrix");
        for (size_t j = 0; j < rows[i].size(); ++j)
            m.at(static_cast<long>(i), static_cast<long>(j)) = sc(rows[i][j]);
    }
    return m;
}

std::vector<std::vector<std::string>> matrix_out(const QMatrix& m)
{
    std::vector<std::vector<std::string>> out;
    for (long i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row;
        for (long j = 0; j < m.cols(); ++j) row.push_back(scalar_to_string(m.at(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

ConnectionGerm germ_in(const std::vector<std::vector<std::vector<std::string>>>& coeffs,
                       const std::string& convention)
{
    std::vector<QMatrix> mats;
    for (const auto& rows : coeffs) mats.push_back(matrix_in(rows));
    if (mats.empty()) throw Error(Errc::size_mismatch, "need at least A0");
    long size = mats[0].rows();
    return ConnectionGerm(size,
                          convention == "minus" ? SignConvention::minus : SignConvention::plus,
                          std::move(mats));
}

py::dict valuation_out(const Valuation& v)
{
    py::dict d;
    d["finite"] = v.finite;
    if (v.finite) d["value"] = v.v;
    return d;
}

py::dict split_out(const SplittingResult& res, SignConvention conv)
{
    py::dict out;
    py::list eigs, projs;
    for (size_t i = 0; i < res.eigen.eigenvalues.size(); ++i) {
        Scalar lam = res.eigen.eigenvalues[i];
        if (conv == SignConvention::minus) lam = -lam;
        py::dict e;
        e["eigenvalue"] = scalar_to_string(lam);
        e["multiplicity"] = res.eigen.multiplicities[i];
        eigs.append(e);
        py::list coeffs;
        for (long k = 0; k <= res.projectors[i].order(); ++k)
            coeffs.append(matrix_out(res.projectors[i].coeff(k)));
        projs.append(coeffs);
    }
    out["eigenvalues"] = eigs;
    out["projectors"] = projs; // projectors[i][k] = k-th coefficient matrix
    py::list diffs;
    for (const auto& d : res.eigen.diff_vals) {
        py::dict row;
        Scalar li = d.lambda_i, lj = d.lambda_j;
        if (conv == SignConvention::minus) {
            li = -li;
            lj = -lj;
        }
        row["pair"] = py::make_tuple(scalar_to_string(li), scalar_to_string(lj));
        row["valuation"] = d.val.v;
        row["unit"] = d.is_unit();
        diffs.append(row);
    }
    out["differences"] = diffs;
    out["verified_to_order"] = res.residual;
    return out;
}

py::dict module_out(const ModuleDescription& md, long p)
{
    py::dict d;
    d["free_rank"] = md.free_rank;
    d["torsion_exponents"] = md.torsion_exponents;
    d["text"] = md.to_string(p);
    return d;
}

} // namespace

PYBIND11_MODULE(_qconn, mod)
{
    mod.doc() = "exact p-adic analysis of quantum connections";
    mod.attr("__version__") = tool_version;

    py::register_exception<Error>(mod, "QconnError");

    mod.def("valuation",
            [](const std::string& x, long p) { return valuation_out(valuation(sc(x), PrimeContext(p))); },
            py::arg("x"), py::arg("p"));
    mod.def("reduce_mod",
            [](const std::string& x, long p, unsigned long m) {
                return reduce_mod(sc(x), PrimeContext(p), m).get_str();
            },
            py::arg("x"), py::arg("p"), py::arg("m"));
    mod.def("factorial_valuation",
            [](unsigned long j, long p) { return factorial_valuation(j, PrimeContext(p)).v; },
            py::arg("j"), py::arg("p"));

    mod.def("reference_series",
            [](const std::string& name, long order) {
                return series_out(reference_series(reference_name_from_string(name), order));
            },
            py::arg("name"), py::arg("order"));

    mod.def("newton_polygon",
            [](const std::vector<std::string>& coeffs, long p) {
                auto rep = newton_polygon(series_in(coeffs), PrimeContext(p));
                py::dict d;
                py::list pts, hull;
                for (const auto& pt : rep.points) pts.append(py::make_tuple(pt.k, pt.val));
                for (const auto& pt : rep.hull) hull.append(py::make_tuple(pt.k, pt.val));
                d["points"] = pts;
                d["hull"] = hull;
                d["min_slope_tail"] =
                    rep.min_slope_tail ? py::object(py::str(scalar_to_string(*rep.min_slope_tail)))
                                       : py::object(py::none());
                return d;
            },
            py::arg("coeffs"), py::arg("p"));

    mod.def("check_log_decay",
            [](const std::vector<std::string>& coeffs, long p, const std::string& alpha,
               const std::string& beta) {
                auto cert = check_log_decay(series_in(coeffs), PrimeContext(p), sc(alpha), sc(beta));
                py::dict d;
                d["pass"] = cert.pass();
                d["verified_up_to"] = cert.verified_up_to;
                if (!cert.pass()) {
                    d["fail_k"] = cert.failure->k;
                    d["fail_m"] = cert.failure->m;
                }
                return d;
            },
            py::arg("coeffs"), py::arg("p"), py::arg("alpha"), py::arg("beta"));

    mod.def("slope_floor",
            [](const std::vector<std::string>& coeffs, long p, const std::string& slope,
               const std::string& gamma, long k_min) {
                auto v = slope_floor(series_in(coeffs), PrimeContext(p), sc(slope), sc(gamma), k_min);
                py::dict d;
                d["pass"] = v.pass();
                if (!v.pass()) d["fail_k"] = *v.first_failure;
                return d;
            },
            py::arg("coeffs"), py::arg("p"), py::arg("slope"), py::arg("gamma"),
            py::arg("k_min") = 0);

    mod.def("mod_p_reduction_degree",
            [](const std::vector<std::string>& coeffs, long p) {
                return mod_p_reduction_degree(series_in(coeffs), PrimeContext(p)).degree;
            },
            py::arg("coeffs"), py::arg("p"));

    mod.def("block_split",
            [](const std::vector<std::vector<std::vector<std::string>>>& coeffs,
               const std::string& convention, long p, long order) {
                ConnectionGerm germ = germ_in(coeffs, convention);
                return split_out(block_split(germ, PrimeContext(p), order), germ.convention);
            },
            py::arg("coeffs"), py::arg("convention"), py::arg("p"), py::arg("order"),
            "Block-diagonalize tau^2 d/dtau + A; coeffs[k] is the matrix of tau^k in the\n"
            "stated convention ('plus' or 'minus'); eigenvalues are reported in that\n"
            "convention.");

    mod.def("split_file",
            [](const std::string& path, long p, long order) {
                ConnectionGerm germ = load_connection(path);
                return split_out(block_split(germ, PrimeContext(p), order), germ.convention);
            },
            py::arg("path"), py::arg("p"), py::arg("order"));

    mod.def("extend_endomorphism",
            [](const std::vector<std::vector<std::vector<std::string>>>& coeffs,
               const std::string& convention, const std::vector<std::vector<std::string>>& e0,
               long order) {
                ConnectionGerm germ = germ_in(coeffs, convention);
                auto [series, rep] = extend_endomorphism(germ, matrix_in(e0), order);
                py::dict d;
                switch (rep.status) {
                case ResonanceReport::Status::unique: d["status"] = "unique"; break;
                case ResonanceReport::Status::non_unique: d["status"] = "non_unique"; break;
                case ResonanceReport::Status::obstructed: d["status"] = "obstructed"; break;
                }
                d["order"] = rep.order;
                d["kernel_dim"] = rep.kernel_dim;
                if (rep.status == ResonanceReport::Status::obstructed)
                    d["obstruction"] = matrix_out(rep.obstruction);
                py::list kern;
                for (const auto& k : rep.kernel) kern.append(matrix_out(k));
                d["kernel"] = kern;
                py::list coeffs_out;
                for (long k = 0; k <= series.order(); ++k)
                    coeffs_out.append(matrix_out(series.coeff(k)));
                d["series"] = coeffs_out;
                return d;
            },
            py::arg("coeffs"), py::arg("convention"), py::arg("e0"), py::arg("order"));

    mod.def("covariant_derivative",
            [](const std::vector<std::vector<std::vector<std::string>>>& coeffs,
               const std::string& convention,
               const std::vector<std::vector<std::vector<std::string>>>& e) {
                ConnectionGerm germ = germ_in(coeffs, convention);
                SeriesMatrix em(germ.size, static_cast<long>(e.size()) - 1);
                for (size_t k = 0; k < e.size(); ++k)
                    em.coeff(static_cast<long>(k)) = matrix_in(e[k]);
                SeriesMatrix der = covariant_derivative(germ, em);
                py::list out;
                for (long k = 0; k <= der.order(); ++k) out.append(matrix_out(der.coeff(k)));
                return out;
            },
            py::arg("coeffs"), py::arg("convention"), py::arg("e"));

    mod.def("ring_summary",
            [](const std::string& path) {
                QuantumRingSlice ring = load_ring(path);
                py::dict d;
                d["name"] = ring.name;
                d["labels"] = ring.labels;
                d["degrees"] = ring.degrees;
                d["dim_c"] = ring.dim_c;
                d["unit"] = ring.labels[static_cast<size_t>(ring.unit_index)];
                return d;
            },
            py::arg("path"));

    mod.def("build_connection_file",
            [](const std::string& path, long degree) {
                QuantumRingSlice ring = load_ring(path);
                DegreeSliceConnection slice = build_connection(ring, degree);
                py::dict d;
                py::list basis;
                for (const auto& b : slice.basis)
                    basis.append(py::make_tuple(
                        b.q_exp, ring.labels[static_cast<size_t>(b.index)]));
                d["basis"] = basis;
                auto disp = slice.germ.displayed_coeffs();
                py::list mats;
                for (const auto& m : disp) mats.append(matrix_out(m));
                d["coeffs"] = mats;
                d["convention"] = "minus";
                return d;
            },
            py::arg("path"), py::arg("degree"));

    mod.def("bgamma_cohomology",
            [](long p, long m, long max_degree) {
                py::list out;
                for (const auto& md : bgamma_cohomology(p, m, 0, max_degree))
                    out.append(module_out(md, p));
                return out;
            },
            py::arg("p"), py::arg("m"), py::arg("max_degree") = 8);

    mod.def("theta_squared",
            [](long p, long m) {
                BGammaCochain th;
                th.p = p;
                th.m = m;
                th.add_term(0, true, 1);
                return bgamma_cup(th, th).to_string();
            },
            py::arg("p"), py::arg("m"));

    mod.def("equivariant_cohomology_file",
            [](const std::string& path, long p, long m, long deg_lo, long deg_hi) {
                ComplexFile cf = load_complex(path);
                EquivariantComplex v;
                v.p = p;
                v.m = m;
                v.v = cf.complex;
                v.sigma = cf.sigma;
                v.validate();
                py::list out;
                for (const auto& md : equivariant_cohomology(v, deg_lo, deg_hi))
                    out.append(module_out(md, p));
                return out;
            },
            py::arg("path"), py::arg("p"), py::arg("m"), py::arg("deg_lo"), py::arg("deg_hi"),
            "Cohomology of C^*(B Gamma_m; V) for the complex (with optional sigma\n"
            "sections) stored in a complex file; trivial action where sigma is absent.");

    mod.def("diag_class_trials",
            [](const std::string& path, long p, long m, long trials, unsigned long seed) {
                ComplexFile cf = load_complex(path);
                if (!cf.cocycle_degree)
                    throw Error(Errc::parse_error, "complex file has no [cocycle]");
                long deg = *cf.cocycle_degree;
                EquivariantComplex v = EquivariantComplex::tensor_power(cf.complex, p, m);
                EquivariantCochain base = tensor_power_class(cf.complex, deg, cf.cocycle, p, m);
                std::mt19937_64 rng(seed);
                std::uniform_int_distribution<long> d(-3, 3);
                long good = 0;
                for (long t = 0; t < trials; ++t) {
                    std::vector<Int> beta(static_cast<size_t>(cf.complex.dim(deg - 1)));
                    for (auto& x : beta) x = d(rng);
                    std::vector<Int> moved = cf.cocycle;
                    if (!beta.empty()) {
                        auto db = cf.complex.d_at(deg - 1).apply(beta);
                        for (size_t i = 0; i < moved.size(); ++i) moved[i] += db[i];
                    }
                    if (cohomologous(v, base, tensor_power_class(cf.complex, deg, moved, p, m)))
                        ++good;
                }
                return py::make_tuple(good, trials);
            },
            py::arg("path"), py::arg("p"), py::arg("m"), py::arg("trials") = 50,
            py::arg("seed") = 1);
}
