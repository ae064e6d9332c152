#include "qconn/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qconn {

namespace {

std::string strip(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string drop_comment(const std::string& s)
{
    size_t h = s.find('#');
    return h == std::string::npos ? s : s.substr(0, h);
}

std::vector<std::string> tokens(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

[[noreturn]] void fail(const std::string& origin, size_t line, const std::string& msg)
{
    throw Error(Errc::parse_error, origin + ":" + std::to_string(line) + ": " + msg);
}

/* Generic sectioned reader: returns ordered (section, lines-with-numbers);
   lines before any section land in section "". */
using Section = std::pair<std::string, std::vector<std::pair<size_t, std::string>>>;

std::vector<Section> split_sections(const std::string& text)
{
    std::vector<Section> out;
    out.push_back({"", {}});
    std::istringstream is(text);
    std::string raw;
    size_t n = 0;
    while (std::getline(is, raw)) {
        ++n;
        std::string line = strip(drop_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']')
            out.push_back({strip(line.substr(1, line.size() - 2)), {}});
        else
            out.back().second.push_back({n, line});
    }
    return out;
}

std::map<std::string, std::pair<size_t, std::string>> key_values(const Section& sec,
                                                                 const std::string& origin)
{
    std::map<std::string, std::pair<size_t, std::string>> out;
    for (const auto& [ln, line] : sec.second) {
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, ln, "expected key = value");
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (out.count(key)) fail(origin, ln, "duplicate key '" + key + "'");
        out[key] = {ln, val};
    }
    return out;
}

long to_long(const std::string& s, const std::string& origin, size_t ln)
{
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(origin, ln, "expected an integer, got '" + s + "'");
    }
}

QMatrix rows_to_qmatrix(const std::vector<std::pair<size_t, std::string>>& lines, long expect,
                        const std::string& origin)
{
    if (lines.empty()) fail(origin, 0, "empty matrix");
    std::vector<std::vector<Scalar>> rows;
    for (const auto& [ln, line] : lines) {
        std::vector<Scalar> row;
        for (const auto& t : tokens(line)) {
            try {
                row.push_back(scalar_from_string(t));
            } catch (const Error& e) {
                fail(origin, ln, e.what());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(origin, ln, "ragged matrix row");
        rows.push_back(std::move(row));
    }
    if (expect > 0 && (static_cast<long>(rows.size()) != expect ||
                       static_cast<long>(rows.front().size()) != expect))
        fail(origin, lines.front().first, "matrix is not " + std::to_string(expect) + " x " +
                                              std::to_string(expect));
    QMatrix m(static_cast<long>(rows.size()), static_cast<long>(rows.front().size()));
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j)
            m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

IMatrix rows_to_imatrix(const std::vector<std::pair<size_t, std::string>>& lines, long rows_n,
                        long cols_n, const std::string& origin)
{
    IMatrix m(rows_n, cols_n);
    if (static_cast<long>(lines.size()) != rows_n)
        fail(origin, lines.empty() ? 0 : lines.front().first,
             "expected " + std::to_string(rows_n) + " rows");
    for (long i = 0; i < rows_n; ++i) {
        auto ts = tokens(lines[static_cast<size_t>(i)].second);
        if (static_cast<long>(ts.size()) != cols_n)
            fail(origin, lines[static_cast<size_t>(i)].first,
                 "expected " + std::to_string(cols_n) + " entries");
        for (long j = 0; j < cols_n; ++j) {
            try {
                m.at(i, j) = Int(ts[static_cast<size_t>(j)]);
            } catch (const std::exception&) {
                fail(origin, lines[static_cast<size_t>(i)].first,
                     "bad integer '" + ts[static_cast<size_t>(j)] + "'");
            }
        }
    }
    return m;
}

} // namespace

ConnectionGerm parse_connection(const std::string& text, const std::string& origin)
{
    auto secs = split_sections(text);
    auto kv = key_values(secs.front(), origin);
    auto need = [&](const std::string& key) -> std::pair<size_t, std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) fail(origin, 1, "missing '" + key + " = ...'");
        return it->second;
    };
    long size = to_long(need("size").second, origin, need("size").first);
    long trunc = to_long(need("truncation").second, origin, need("truncation").first);
    std::string conv = need("convention").second;
    if (conv != "plus" && conv != "minus")
        fail(origin, need("convention").first, "convention must be 'plus' or 'minus'");
    if (size < 1 || trunc < 0) fail(origin, 1, "bad size/truncation");

    std::vector<QMatrix> mats(static_cast<size_t>(trunc) + 1, QMatrix(size, size));
    std::vector<bool> seen(static_cast<size_t>(trunc) + 1, false);
    for (size_t s = 1; s < secs.size(); ++s) {
        const std::string& name = secs[s].first;
        if (name.size() < 2 || name[0] != 'A')
            fail(origin, secs[s].second.empty() ? 0 : secs[s].second.front().first,
                 "unknown section [" + name + "]");
        long k = to_long(name.substr(1), origin, 0);
        if (k < 0 || k > trunc) fail(origin, 0, "coefficient index " + name + " out of range");
        mats[static_cast<size_t>(k)] = rows_to_qmatrix(secs[s].second, size, origin);
        seen[static_cast<size_t>(k)] = true;
    }
    for (long k = 0; k <= trunc; ++k)
        if (!seen[static_cast<size_t>(k)])
            fail(origin, 0, "missing section [A" + std::to_string(k) + "]");
    return ConnectionGerm(size, conv == "minus" ? SignConvention::minus : SignConvention::plus,
                          std::move(mats));
}

std::string serialize_connection(const ConnectionGerm& germ)
{
    std::ostringstream os;
    os << "size = " << germ.size << "\n";
    os << "convention = " << (germ.convention == SignConvention::minus ? "minus" : "plus") << "\n";
    os << "truncation = " << germ.top_index() << "\n";
    auto displayed = germ.displayed_coeffs();
    for (size_t k = 0; k < displayed.size(); ++k) {
        os << "[A" << k << "]\n";
        os << serialize_matrix(displayed[k]);
    }
    return os.str();
}

QMatrix parse_matrix(const std::string& text, const std::string& origin)
{
    auto secs = split_sections(text);
    if (secs.size() != 1) fail(origin, 0, "matrix files have no sections");
    return rows_to_qmatrix(secs.front().second, 0, origin);
}

std::string serialize_matrix(const QMatrix& m)
{
    std::ostringstream os;
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << scalar_to_string(m.at(i, j));
        os << "\n";
    }
    return os.str();
}

TruncatedSeries parse_series(const std::string& text, const std::string& origin)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(Errc::parse_error, origin + ": " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw Error(Errc::parse_error, origin + ": expected a nonempty JSON array of scalars");
    std::vector<Scalar> coeffs;
    for (const auto& item : j) {
        if (!item.is_string())
            throw Error(Errc::parse_error, origin + ": series entries are scalar strings");
        coeffs.push_back(scalar_from_string(item.get<std::string>()));
    }
    return TruncatedSeries(std::move(coeffs));
}

std::string serialize_series(const TruncatedSeries& s)
{
    nlohmann::json j = nlohmann::json::array();
    for (long k = 0; k <= s.order(); ++k) j.push_back(scalar_to_string(s[k]));
    return j.dump();
}

QuantumRingSlice parse_ring(const std::string& text, const std::string& origin)
{
    QuantumRingSlice ring;
    auto secs = split_sections(text);
    std::string unit_label;
    bool saw_meta = false, saw_basis = false, saw_product = false;

    for (const auto& sec : secs) {
        if (sec.first.empty()) {
            if (!sec.second.empty())
                fail(origin, sec.second.front().first, "content before the first section");
            continue;
        }
        if (sec.first == "meta") {
            saw_meta = true;
            auto kv = key_values(sec, origin);
            if (kv.count("name")) ring.name = kv["name"].second;
            if (!kv.count("dim_c")) fail(origin, 1, "[meta] needs dim_c");
            if (!kv.count("unit")) fail(origin, 1, "[meta] needs unit");
            ring.dim_c = to_long(kv["dim_c"].second, origin, kv["dim_c"].first);
            unit_label = kv["unit"].second;
        } else if (sec.first == "basis") {
            saw_basis = true;
            for (const auto& [ln, line] : sec.second) {
                auto ts = tokens(line);
                if (ts.size() != 2) fail(origin, ln, "basis lines are 'label degree'");
                ring.labels.push_back(ts[0]);
                ring.degrees.push_back(to_long(ts[1], origin, ln));
            }
        } else if (sec.first == "c1") {
            for (const auto& [ln, line] : sec.second) {
                auto ts = tokens(line);
                if (ts.size() != 2) fail(origin, ln, "c1 lines are 'coeff label'");
                try {
                    ring.c1.push_back({scalar_from_string(ts[0]), 0, ring.index_of(ts[1])});
                } catch (const Error& e) {
                    fail(origin, ln, e.what());
                }
            }
        } else if (sec.first == "product") {
            saw_product = true;
            size_t n = ring.labels.size();
            ring.products.assign(n, std::vector<RingElement>(n));
            std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
            for (const auto& [ln, line] : sec.second) {
                size_t eq = line.find('=');
                if (eq == std::string::npos) fail(origin, ln, "product lines are 'a b = terms'");
                auto lhs = tokens(line.substr(0, eq));
                if (lhs.size() != 2) fail(origin, ln, "left side must be two labels");
                int i, j;
                try {
                    i = ring.index_of(lhs[0]);
                    j = ring.index_of(lhs[1]);
                } catch (const Error& e) {
                    fail(origin, ln, e.what());
                }
                if (seen[static_cast<size_t>(i)][static_cast<size_t>(j)])
                    fail(origin, ln, "duplicate product " + lhs[0] + " " + lhs[1]);
                seen[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
                std::string rhs = strip(line.substr(eq + 1));
                RingElement elem;
                if (rhs != "0") {
                    // terms 'coeff q^e label' separated by '+'
                    std::istringstream ts_str(rhs);
                    std::string term;
                    while (std::getline(ts_str, term, '+')) {
                        auto ps = tokens(term);
                        if (ps.size() != 3 || ps[1].rfind("q^", 0) != 0)
                            fail(origin, ln, "terms are 'coeff q^e label', got '" + strip(term) + "'");
                        try {
                            elem.push_back({scalar_from_string(ps[0]),
                                            to_long(ps[1].substr(2), origin, ln),
                                            ring.index_of(ps[2])});
                        } catch (const Error& e) {
                            fail(origin, ln, e.what());
                        }
                    }
                }
                ring.products[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    canonicalize(std::move(elem));
            }
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!seen[i][j])
                        fail(origin, 0, "product " + ring.labels[i] + " " + ring.labels[j] +
                                            " not declared");
        } else {
            fail(origin, sec.second.empty() ? 0 : sec.second.front().first,
                 "unknown section [" + sec.first + "]");
        }
    }
    if (!saw_meta || !saw_basis || !saw_product)
        fail(origin, 1, "ring files need [meta], [basis] and [product] sections");
    ring.unit_index = ring.index_of(unit_label);
    ring.c1 = canonicalize(ring.c1);
    ring.validate();
    return ring;
}

std::string serialize_ring(const QuantumRingSlice& ring)
{
    std::ostringstream os;
    os << "[meta]\n";
    if (!ring.name.empty()) os << "name = " << ring.name << "\n";
    os << "dim_c = " << ring.dim_c << "\n";
    os << "unit = " << ring.labels[static_cast<size_t>(ring.unit_index)] << "\n";
    os << "[basis]\n";
    for (size_t i = 0; i < ring.labels.size(); ++i)
        os << ring.labels[i] << " " << ring.degrees[i] << "\n";
    os << "[c1]\n";
    for (const auto& t : ring.c1)
        os << scalar_to_string(t.coeff) << " " << ring.labels[static_cast<size_t>(t.index)] << "\n";
    os << "[product]\n";
    for (size_t i = 0; i < ring.labels.size(); ++i)
        for (size_t j = 0; j < ring.labels.size(); ++j) {
            os << ring.labels[i] << " " << ring.labels[j] << " =";
            const auto& elem = ring.products[i][j];
            if (elem.empty()) {
                os << " 0";
            } else {
                for (size_t t = 0; t < elem.size(); ++t) {
                    if (t) os << " +";
                    os << " " << scalar_to_string(elem[t].coeff) << " q^" << elem[t].q_exp << " "
                       << ring.labels[static_cast<size_t>(elem[t].index)];
                }
            }
            os << "\n";
        }
    return os.str();
}

ComplexFile parse_complex(const std::string& text, const std::string& origin)
{
    ComplexFile out;
    auto secs = split_sections(text);
    auto kv = key_values(secs.front(), origin);
    if (kv.count("p")) out.p = to_long(kv["p"].second, origin, kv["p"].first);
    if (kv.count("m")) out.m = to_long(kv["m"].second, origin, kv["m"].first);

    // first pass: degrees
    for (const auto& sec : secs) {
        if (sec.first != "degrees") continue;
        for (const auto& [ln, line] : sec.second) {
            auto ts = tokens(line);
            if (ts.size() != 2) fail(origin, ln, "degree lines are 'degree rank'");
            long deg = to_long(ts[0], origin, ln), rank = to_long(ts[1], origin, ln);
            if (rank <= 0) fail(origin, ln, "rank must be positive");
            out.complex.dims[deg] = rank;
        }
    }
    if (out.complex.dims.empty()) fail(origin, 1, "missing [degrees] section");

    for (const auto& sec : secs) {
        auto ts = tokens(sec.first);
        if (ts.size() == 2 && (ts[0] == "d" || ts[0] == "sigma")) {
            long deg = to_long(ts[1], origin, 0);
            long n = out.complex.dim(deg);
            if (n == 0) fail(origin, 0, "[" + sec.first + "] at a degree with rank 0");
            if (ts[0] == "d")
                out.complex.d[deg] =
                    rows_to_imatrix(sec.second, out.complex.dim(deg + 1), n, origin);
            else
                out.sigma[deg] = rows_to_imatrix(sec.second, n, n, origin);
        } else if (sec.first == "cocycle") {
            if (sec.second.size() != 2)
                fail(origin, sec.second.empty() ? 0 : sec.second.front().first,
                     "[cocycle] holds a degree line then an entries line");
            long deg = to_long(strip(sec.second[0].second), origin, sec.second[0].first);
            out.cocycle_degree = deg;
            for (const auto& t : tokens(sec.second[1].second)) {
                try {
                    out.cocycle.push_back(Int(t));
                } catch (const std::exception&) {
                    fail(origin, sec.second[1].first, "bad integer '" + t + "'");
                }
            }
            if (static_cast<long>(out.cocycle.size()) != out.complex.dim(deg))
                fail(origin, sec.second[1].first, "cocycle length does not match the rank");
        } else if (sec.first != "" && sec.first != "degrees") {
            fail(origin, sec.second.empty() ? 0 : sec.second.front().first,
                 "unknown section [" + sec.first + "]");
        }
    }
    out.complex.validate();
    return out;
}

BGammaCochain parse_bgamma_cochain(const std::string& expr, long p, long m)
{
    BGammaCochain out;
    out.p = p;
    out.m = m;
    std::string cur;
    std::vector<std::pair<int, std::string>> terms; // sign, body
    int sign = 1;
    for (char ch : expr + "+") {
        if (ch == '+' || ch == '-') {
            if (!strip(cur).empty()) terms.push_back({sign, strip(cur)});
            sign = ch == '-' ? -1 : 1;
            cur.clear();
        } else {
            cur += ch;
        }
    }
    for (const auto& [sg, body] : terms) {
        Int coeff = sg;
        long i = 0;
        bool theta = false, saw_t = false;
        std::istringstream is(body);
        std::string factor;
        while (std::getline(is, factor, '*')) {
            factor = strip(factor);
            if (factor.empty()) continue;
            if (factor == "theta") {
                theta = true;
            } else if (factor.rfind("t^", 0) == 0) {
                try {
                    size_t pos = 0;
                    i = std::stol(factor.substr(2), &pos);
                    if (pos != factor.size() - 2) throw std::invalid_argument(factor);
                } catch (const std::exception&) {
                    throw Error(Errc::parse_error, "bad exponent in '" + factor + "'");
                }
                saw_t = true;
            } else if (factor == "t") {
                i = 1;
                saw_t = true;
            } else {
                try {
                    coeff *= Int(factor);
                } catch (const std::exception&) {
                    throw Error(Errc::parse_error, "bad cochain factor '" + factor + "'");
                }
            }
        }
        if (!saw_t && !theta)
            throw Error(Errc::parse_error, "term '" + body + "' has neither t^i nor theta");
        out.add_term(i, theta, coeff);
    }
    return out;
}

std::string read_file(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::parse_error, "cannot open " + file.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& file, const std::string& content)
{
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(Errc::parse_error, "cannot write " + file.string());
    out << content;
}

ConnectionGerm load_connection(const std::filesystem::path& f)
{
    return parse_connection(read_file(f), f.string());
}
QMatrix load_matrix(const std::filesystem::path& f)
{
    return parse_matrix(read_file(f), f.string());
}
TruncatedSeries load_series(const std::filesystem::path& f)
{
    return parse_series(read_file(f), f.string());
}
QuantumRingSlice load_ring(const std::filesystem::path& f)
{
    return parse_ring(read_file(f), f.string());
}
ComplexFile load_complex(const std::filesystem::path& f)
{
    return parse_complex(read_file(f), f.string());
}

} // namespace qconn
