#include <chrono>
#include <cstdlib>
#include <random>
#include <iostream>

#include <CLI11.hpp>

#include "qconn/io.hpp"
#include "qconn/report.hpp"
#include "qconn/splitting.hpp"
#include "qconn/version.hpp"

using namespace qconn;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_verdict = 2;

std::filesystem::path resolve_out(const std::string& path)
{
    std::filesystem::path p(path);
    const char* base = std::getenv("QCONN_OUT_DIR");
    if (base && p.is_relative()) return std::filesystem::path(base) / p;
    return p;
}

struct Emitter {
    RunReport report;
    std::string out_file;
    std::vector<std::string> artifacts; // listed outside the digest scope
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Emitter(const std::string& echo) : report(echo) {}

    int finish(int code)
    {
        long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::string digest = report.digest(); // of the verdict body only
        report.section("artifacts");
        for (const auto& line : artifacts) report.line(line);
        report.kv("body_digest", digest);
        std::string text = report.full(ms);
        if (out_file.empty())
            std::cout << text;
        else
            write_file(resolve_out(out_file), text);
        return code;
    }
};

void emit_lines(RunReport& rep, const std::string& text, const std::string& indent = "")
{
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) rep.line(indent + line);
}

void describe_eigen(RunReport& rep, const EigenData& eig, SignConvention conv)
{
    for (size_t i = 0; i < eig.eigenvalues.size(); ++i) {
        Scalar lam = eig.eigenvalues[i];
        if (conv == SignConvention::minus) lam = -lam;
        rep.line("eigenvalue: " + scalar_to_string(lam) + " (mult " +
                 std::to_string(eig.multiplicities[i]) + ")");
    }
    for (const auto& d : eig.diff_vals) {
        Scalar li = d.lambda_i, lj = d.lambda_j;
        if (conv == SignConvention::minus) {
            li = -li;
            lj = -lj;
        }
        rep.line("difference " + scalar_to_string(li) + " - " + scalar_to_string(lj) +
                 ": val = " + d.val.to_string() + (d.is_unit() ? " (unit)" : " (NOT a unit)"));
    }
}

void print_series_matrix(RunReport& rep, const SeriesMatrix& e, const std::string& label)
{
    for (long i = 0; i < e.size(); ++i)
        for (long j = 0; j < e.size(); ++j) {
            TruncatedSeries s = e.entry(i, j);
            if (s.is_zero()) continue;
            rep.line(label + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                     "] = " + s.to_string());
        }
}

int cmd_ring_validate(const std::string& file, Emitter& em)
{
    std::string bytes = read_file(file);
    em.report.add_input(file, bytes);
    QuantumRingSlice ring = parse_ring(bytes, file); // validates
    em.report.section("verdicts");
    em.report.kv("ring", ring.name.empty() ? "(unnamed)" : ring.name);
    em.report.kv("basis_rank", std::to_string(ring.labels.size()));
    em.report.kv("dim_c", std::to_string(ring.dim_c));
    em.report.kv("grading", "pass");
    em.report.kv("unit", "pass");
    em.report.kv("associativity", "pass");
    em.report.kv("result", "pass");
    return exit_ok;
}

int cmd_conn_build(const std::string& file, long degree, const std::string& germ_out, Emitter& em)
{
    std::string bytes = read_file(file);
    em.report.add_input(file, bytes);
    QuantumRingSlice ring = parse_ring(bytes, file);
    DegreeSliceConnection slice = build_connection(ring, degree);
    em.report.section("verdicts");
    em.report.kv("degree", std::to_string(degree));
    for (size_t t = 0; t < slice.basis.size(); ++t)
        em.report.line("basis[" + std::to_string(t + 1) + "]: q^" +
                       std::to_string(slice.basis[t].q_exp) + " * " +
                       ring.labels[static_cast<size_t>(slice.basis[t].index)]);
    std::string germ_text = serialize_connection(slice.germ);
    emit_lines(em.report, germ_text);
    if (!germ_out.empty()) write_file(resolve_out(germ_out), germ_text);
    em.report.kv("result", "pass");
    return exit_ok;
}

int cmd_split(const std::string& file, long prime, long order, const std::string& alpha,
              const std::string& beta, const std::string& plots, Emitter& em)
{
    std::string bytes = read_file(file);
    em.report.add_input(file, bytes);
    ConnectionGerm germ = parse_connection(bytes, file);
    PrimeContext ctx(prime);
    em.report.section("verdicts");
    em.report.kv("prime", std::to_string(prime));
    em.report.kv("order", std::to_string(order));
    em.report.kv("convention", germ.convention == SignConvention::minus ? "minus" : "plus");

    SplittingResult res;
    try {
        res = block_split(germ, ctx, order);
    } catch (const Error& e) {
        if (e.code != Errc::non_split_spectrum) throw;
        em.report.kv("spectrum", std::string("non-split: ") + e.what());
        em.report.kv("result", "fail");
        return exit_verdict;
    }
    describe_eigen(em.report, res.eigen, germ.convention);
    em.report.kv("invariants",
                 "pass (sum = 1, orthogonal idempotents, covariantly constant to order " +
                     std::to_string(res.residual) + ")");

    Scalar a = scalar_from_string(alpha), b = scalar_from_string(beta);
    bool all_pass = true;
    for (size_t i = 0; i < res.projectors.size(); ++i) {
        Scalar lam = res.eigen.eigenvalues[i];
        if (germ.convention == SignConvention::minus) lam = -lam;
        std::string tag = "E[" + scalar_to_string(lam) + "]";
        auto div = verify_divisibility(res.projectors[i], ctx, a, b);
        if (div.pass) {
            em.report.kv("divisibility " + tag,
                         "pass (alpha=" + scalar_to_string(a) + " beta=" + scalar_to_string(b) +
                             " up to K=" + std::to_string(div.verified_up_to) + ")");
        } else {
            all_pass = false;
            em.report.kv("divisibility " + tag,
                         "fail at entry (" + std::to_string(div.fail_row + 1) + "," +
                             std::to_string(div.fail_col + 1) + ") k=" +
                             std::to_string(div.failure->k) + " needs val >= " +
                             std::to_string(div.failure->m));
        }
        print_series_matrix(em.report, res.projectors[i], tag);
    }
    em.report.kv("divisibility", all_pass ? "pass" : "fail");
    em.report.kv("result", all_pass ? "pass" : "fail");

    if (!plots.empty()) {
        std::filesystem::create_directories(resolve_out(plots));
        for (size_t i = 0; i < res.projectors.size(); ++i) {
            // entrywise-minimum valuation profile of the projector
            std::vector<NewtonPoint> pts;
            for (long k = 0; k <= order; ++k) {
                std::optional<long> best;
                for (long r = 0; r < germ.size; ++r)
                    for (long c = 0; c < germ.size; ++c) {
                        const Scalar& x = res.projectors[i].coeff(k).at(r, c);
                        if (x == 0) continue;
                        long v = valuation(x, ctx).v;
                        if (!best || v < *best) best = v;
                    }
                if (best) pts.push_back({k, *best});
            }
            if (pts.empty()) continue;
            auto np = newton_polygon_from_points(std::move(pts), order);
            Scalar lam = res.eigen.eigenvalues[i];
            if (germ.convention == SignConvention::minus) lam = -lam;
            std::string name =
                "newton-E" + scalar_to_string(lam) + "-" + em.report.digest() + ".svg";
            write_file(resolve_out(plots) / name, newton_polygon_svg(np));
            em.artifacts.push_back("plot: " + name);
        }
    }
    return all_pass ? exit_ok : exit_verdict;
}

int cmd_extend(const std::string& conn_file, const std::string& e0_file, long order, Emitter& em)
{
    std::string conn_bytes = read_file(conn_file), e0_bytes = read_file(e0_file);
    em.report.add_input(conn_file, conn_bytes);
    em.report.add_input(e0_file, e0_bytes);
    ConnectionGerm germ = parse_connection(conn_bytes, conn_file);
    QMatrix e0 = parse_matrix(e0_bytes, e0_file);

    em.report.section("verdicts");
    em.report.kv("order", std::to_string(order));

    // order-0 commutator test: matrices written in the row convention are
    // detected and transposed, with a warning
    QMatrix lead = germ.a0().is_zero() ? germ.a(1) : germ.a0();
    if (!commutator(lead, e0).is_zero() && commutator(lead, e0.transpose()).is_zero()) {
        e0 = e0.transpose();
        em.report.line("warning: E0 passes the order-0 commutator test only after "
                       "transposition; proceeding in the row convention");
    }
    auto [series, rep] = extend_endomorphism(germ, e0, order);
    switch (rep.status) {
    case ResonanceReport::Status::unique:
        em.report.kv("status", "unique");
        break;
    case ResonanceReport::Status::non_unique:
        em.report.kv("status", "non_unique at order " + std::to_string(rep.order) +
                                   " (kernel dimension " + std::to_string(rep.kernel_dim) + ")");
        break;
    case ResonanceReport::Status::obstructed:
        em.report.kv("status", "obstructed at order " + std::to_string(rep.order));
        break;
    }
    if (rep.status == ResonanceReport::Status::obstructed) {
        em.report.line("obstruction component:");
        emit_lines(em.report, serialize_matrix(rep.obstruction), "  ");
        em.report.kv("result", "fail");
        return exit_verdict;
    }
    print_series_matrix(em.report, series, "E");
    for (size_t t = 0; t < rep.kernel.size(); ++t) {
        em.report.line("kernel[" + std::to_string(t + 1) + "] at order " +
                       std::to_string(rep.order) + ":");
        emit_lines(em.report, serialize_matrix(rep.kernel[t]), "  ");
    }
    em.report.kv("result", "pass");
    return exit_ok;
}

int cmd_verify(const std::string& series_file, long prime, const std::string& alpha,
               const std::string& beta, const std::string& slope, const std::string& gamma,
               long k_min, bool mod_degree, const std::string& svg, long tail_from, Emitter& em)
{
    std::string bytes = read_file(series_file);
    em.report.add_input(series_file, bytes);
    TruncatedSeries s = parse_series(bytes, series_file);
    PrimeContext ctx(prime);
    em.report.section("verdicts");
    em.report.kv("prime", std::to_string(prime));
    em.report.kv("order", std::to_string(s.order()));

    bool ok = true;
    if (!s.is_zero()) {
        auto np = newton_polygon(s, ctx,
                                 tail_from >= 0 ? std::optional<long>(tail_from) : std::nullopt);
        std::string hull;
        for (const auto& pt : np.hull)
            hull += "(" + std::to_string(pt.k) + "," + std::to_string(pt.val) + ") ";
        em.report.kv("newton_hull", hull);
        em.report.kv("min_slope_tail",
                     np.min_slope_tail ? scalar_to_string(*np.min_slope_tail) : "n/a");
        if (!svg.empty()) {
            write_file(resolve_out(svg), newton_polygon_svg(np));
            em.artifacts.push_back("plot: " + svg);
        }
    } else {
        em.report.kv("newton_hull", "zero series");
    }

    if (!alpha.empty()) {
        auto cert = check_log_decay(s, ctx, scalar_from_string(alpha), scalar_from_string(beta));
        if (cert.pass()) {
            em.report.kv("log_decay", "pass (alpha=" + alpha + " beta=" + beta + " up to K=" +
                                          std::to_string(cert.verified_up_to) + ")");
        } else {
            ok = false;
            em.report.kv("log_decay", "fail at k=" + std::to_string(cert.failure->k) +
                                          " needs val >= " + std::to_string(cert.failure->m));
        }
    }
    if (!slope.empty()) {
        auto v = slope_floor(s, ctx, scalar_from_string(slope), scalar_from_string(gamma), k_min);
        if (v.pass()) {
            em.report.kv("slope_floor", "pass (slope=" + slope + " gamma=" + gamma + " from k=" +
                                            std::to_string(k_min) + ")");
        } else {
            ok = false;
            em.report.kv("slope_floor", "fail at k=" + std::to_string(*v.first_failure));
        }
    }
    if (mod_degree) {
        auto d = mod_p_reduction_degree(s, ctx);
        em.report.kv("mod_p_degree", d.degree < 0 ? "zero polynomial" : std::to_string(d.degree));
    }
    em.report.kv("result", ok ? "pass" : "fail");
    return ok ? exit_ok : exit_verdict;
}

int cmd_bgamma_cohomology(long p, long m, long max_degree, Emitter& em)
{
    auto mods = bgamma_cohomology(p, m, 0, max_degree);
    em.report.section("verdicts");
    em.report.kv("p", std::to_string(p));
    em.report.kv("m", std::to_string(m));
    for (long d = 0; d <= max_degree; ++d)
        em.report.kv("H^" + std::to_string(d), mods[static_cast<size_t>(d)].to_string(p));
    em.report.kv("result", "pass");
    return exit_ok;
}

int cmd_bgamma_cup(long p, long m, const std::string& a, const std::string& b, Emitter& em)
{
    BGammaCochain ca = parse_bgamma_cochain(a, p, m);
    BGammaCochain cb = parse_bgamma_cochain(b, p, m);
    em.report.section("verdicts");
    em.report.kv("p", std::to_string(p));
    em.report.kv("m", std::to_string(m));
    em.report.kv("a", ca.to_string());
    em.report.kv("b", cb.to_string());
    em.report.kv("cup", bgamma_cup(ca, cb).to_string());
    em.report.kv("result", "pass");
    return exit_ok;
}

int cmd_bgamma_restrict(long p, long m, const std::string& expr, Emitter& em)
{
    BGammaCochain c = parse_bgamma_cochain(expr, p, m);
    em.report.section("verdicts");
    em.report.kv("p", std::to_string(p));
    em.report.kv("from_level", std::to_string(m));
    em.report.kv("to_level", std::to_string(m - 1));
    em.report.kv("cochain", c.to_string());
    em.report.kv("restriction", bgamma_restrict(c).to_string());
    em.report.kv("result", "pass");
    return exit_ok;
}

int cmd_diag_class(const std::string& file, long p, long m, long trials, unsigned long seed,
                   Emitter& em)
{
    std::string bytes = read_file(file);
    em.report.add_input(file, bytes);
    ComplexFile cf = parse_complex(bytes, file);
    if (!cf.cocycle_degree)
        throw Error(Errc::parse_error, file + ": diag-class needs a [cocycle] section");
    long deg = *cf.cocycle_degree;

    EquivariantComplex v = EquivariantComplex::tensor_power(cf.complex, p, m);
    EquivariantCochain base = tensor_power_class(cf.complex, deg, cf.cocycle, p, m);
    em.report.section("verdicts");
    em.report.kv("p", std::to_string(p));
    em.report.kv("m", std::to_string(m));
    em.report.kv("cocycle_degree", std::to_string(deg));
    em.report.kv("class_degree", std::to_string(base.total_degree));
    em.report.kv("cocycle_check", differential(v, base).is_zero() ? "pass" : "fail");

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
        EquivariantCochain pert = tensor_power_class(cf.complex, deg, moved, p, m);
        if (cohomologous(v, base, pert)) ++good;
    }
    em.report.kv("trials", std::to_string(trials));
    em.report.kv("cohomologous", std::to_string(good) + "/" + std::to_string(trials));
    bool ok = good == trials;
    em.report.kv("result", ok ? "pass" : "fail");
    return ok ? exit_ok : exit_verdict;
}

int cmd_bgamma_tower(long p, long degree, long m_lo, long m_hi, Emitter& em)
{
    TowerReport rep = inverse_limit_tower(p, degree, m_lo, m_hi);
    em.report.section("verdicts");
    em.report.kv("p", std::to_string(p));
    em.report.kv("degree", std::to_string(degree));
    for (const auto& lvl : rep.levels) {
        std::string line = "m = " + std::to_string(lvl.m) + ": " + lvl.module.to_string(p);
        if (lvl.m < rep.levels.back().m)
            line += lvl.generator_maps_to_generator ? " <- generator maps to generator"
                                                    : " <- COMPATIBILITY FAILURE";
        em.report.line(line);
    }
    em.report.kv("limit", rep.limit);
    em.report.kv("result", rep.compatible ? "pass" : "fail");
    return rep.compatible ? exit_ok : exit_verdict;
}

int cmd_reference(const std::string& name, long order, const std::string& series_out, Emitter& em)
{
    TruncatedSeries s = reference_series(reference_name_from_string(name), order);
    em.report.section("verdicts");
    em.report.kv("name", name);
    em.report.kv("order", std::to_string(order));
    em.report.kv("series", s.to_string());
    std::string json = serialize_series(s);
    if (!series_out.empty()) write_file(resolve_out(series_out), json);
    em.report.kv("result", "pass");
    return exit_ok;
}

std::string join_argv(int argc, char** argv)
{
    std::string out;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) out += " ";
        out += argv[i];
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact p-adic analysis of quantum connections"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    std::string out_file, conn_file, e0_file, ring_file, series_file, complex_file;
    std::string alpha = "1", beta = "1", slope, gamma = "0", plots, expr_a, expr_b, name, svg;
    std::string germ_out, series_out;
    long prime = 3, order = 64, degree = 0, p = 3, m = 1, max_degree = 8, k_min = 0, trials = 50;
    unsigned long seed = 1;
    bool mod_degree = false, no_log_decay = false;

    auto* ring = app.add_subcommand("ring", "quantum ring files");
    ring->require_subcommand(1);
    auto* ring_validate = ring->add_subcommand("validate", "validate a ring file");
    ring_validate->add_option("file", ring_file)->required();
    ring_validate->add_option("--out", out_file);

    auto* conn = app.add_subcommand("conn", "quantum connections from ring data");
    conn->require_subcommand(1);
    auto* conn_build = conn->add_subcommand("build", "build a degree-slice connection");
    conn_build->add_option("file", ring_file)->required();
    conn_build->add_option("--degree", degree)->required();
    conn_build->add_option("--germ-out", germ_out, "write the germ to this file");
    conn_build->add_option("--out", out_file);

    auto* split = app.add_subcommand("split", "block-diagonalize a connection germ");
    split->add_option("--conn", conn_file)->required();
    split->add_option("--prime", prime);
    split->add_option("--order", order);
    split->add_option("--alpha", alpha);
    split->add_option("--beta", beta);
    split->add_option("--plots", plots, "directory for newton polygon SVG plots");
    split->add_option("--out", out_file);

    auto* extend = app.add_subcommand("extend", "extend an endomorphism across a simple pole");
    extend->add_option("--conn", conn_file)->required();
    extend->add_option("--e0", e0_file)->required();
    extend->add_option("--order", order);
    extend->add_option("--out", out_file);

    auto* verify = app.add_subcommand("verify", "p-adic certificates for a series file");
    verify->add_option("--series", series_file)->required();
    verify->add_option("--prime", prime);
    verify->add_option("--alpha", alpha);
    verify->add_option("--beta", beta);
    auto* slope_opt = verify->add_option("--slope", slope);
    verify->add_option("--gamma", gamma)->needs(slope_opt);
    verify->add_option("--from", k_min, "first k for the slope floor");
    long tail_from = -1;
    verify->add_option("--tail-from", tail_from,
                       "window start for min_slope_tail (default: ceil(K/2))");
    verify->add_flag("--mod-degree", mod_degree, "report the mod-p polynomial degree");
    verify->add_option("--svg", svg, "write the newton polygon plot here");
    verify->add_option("--out", out_file);
    verify->add_flag("--no-log-decay", no_log_decay, "skip the log-decay certificate");

    auto* bg = app.add_subcommand("bgamma", "cyclic group cochain calculus");
    bg->require_subcommand(1);
    auto* bg_coh = bg->add_subcommand("cohomology", "cohomology of B Gamma_m");
    bg_coh->add_option("--p", p);
    bg_coh->add_option("--m", m);
    bg_coh->add_option("--max-degree", max_degree);
    bg_coh->add_option("--out", out_file);
    auto* bg_cup = bg->add_subcommand("cup", "chain-level cup product");
    bg_cup->add_option("--p", p);
    bg_cup->add_option("--m", m);
    bg_cup->add_option("--a", expr_a)->required();
    bg_cup->add_option("--b", expr_b)->required();
    bg_cup->add_option("--out", out_file);
    auto* bg_res = bg->add_subcommand("restrict", "restriction from level m to m-1");
    bg_res->add_option("--p", p);
    bg_res->add_option("--m", m, "level of the input cochain");
    bg_res->add_option("--cochain", expr_a)->required();
    bg_res->add_option("--out", out_file);
    long m_lo = 1, m_hi = 4;
    auto* bg_tower = bg->add_subcommand("tower", "compatible system across levels");
    bg_tower->add_option("--p", p);
    bg_tower->add_option("--degree", degree)->required();
    bg_tower->add_option("--m-from", m_lo);
    bg_tower->add_option("--m-to", m_hi);
    bg_tower->add_option("--out", out_file);

    auto* diag = app.add_subcommand("diag-class", "tensor power diagonal classes");
    diag->add_option("--complex", complex_file)->required();
    diag->add_option("--p", p);
    diag->add_option("--m", m);
    diag->add_option("--trials", trials);
    diag->add_option("--seed", seed);
    diag->add_option("--out", out_file);

    auto* ref = app.add_subcommand("reference", "closed-form example series");
    ref->add_option("--name", name)->required();
    ref->add_option("--order", order);
    ref->add_option("--series-out", series_out, "write the series as JSON");
    ref->add_option("--out", out_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_input;
    }

    Emitter em(join_argv(argc, argv));
    em.out_file = out_file;
    try {
        int code = exit_input;
        if (ring_validate->parsed())
            code = cmd_ring_validate(ring_file, em);
        else if (conn_build->parsed())
            code = cmd_conn_build(ring_file, degree, germ_out, em);
        else if (split->parsed())
            code = cmd_split(conn_file, prime, order, alpha, beta, plots, em);
        else if (extend->parsed())
            code = cmd_extend(conn_file, e0_file, order, em);
        else if (verify->parsed())
            code = cmd_verify(series_file, prime, no_log_decay ? "" : alpha, beta, slope, gamma,
                              k_min, mod_degree, svg, tail_from, em);
        else if (bg_coh->parsed())
            code = cmd_bgamma_cohomology(p, m, max_degree, em);
        else if (bg_cup->parsed())
            code = cmd_bgamma_cup(p, m, expr_a, expr_b, em);
        else if (bg_res->parsed())
            code = cmd_bgamma_restrict(p, m, expr_a, em);
        else if (bg_tower->parsed())
            code = cmd_bgamma_tower(p, degree, m_lo, m_hi, em);
        else if (diag->parsed())
            code = cmd_diag_class(complex_file, p, m, trials, seed, em);
        else if (ref->parsed())
            code = cmd_reference(name, order, series_out, em);
        return em.finish(code);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code) << "]: " << e.what() << "\n";
        return e.code == Errc::non_split_spectrum ? exit_verdict : exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
}
