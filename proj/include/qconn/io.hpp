#pragma once

#include <filesystem>
#include <string>

#include "qconn/equivariant.hpp"
#include "qconn/quantum_ring.hpp"
#include "qconn/series_matrix.hpp"

namespace qconn {

/* All formats are line-oriented UTF-8 text; '#' starts a comment. */

// connection files: size/convention/truncation headers + [Ak] matrix sections
ConnectionGerm parse_connection(const std::string& text, const std::string& origin);
ConnectionGerm load_connection(const std::filesystem::path& file);
std::string serialize_connection(const ConnectionGerm& germ);

// matrix files: one row per line, scalar entries
QMatrix parse_matrix(const std::string& text, const std::string& origin);
QMatrix load_matrix(const std::filesystem::path& file);
std::string serialize_matrix(const QMatrix& m);

// series files: JSON array of scalar strings
TruncatedSeries parse_series(const std::string& text, const std::string& origin);
TruncatedSeries load_series(const std::filesystem::path& file);
std::string serialize_series(const TruncatedSeries& s);

// ring files: [meta] / [basis] / [c1] / [product] sections
QuantumRingSlice parse_ring(const std::string& text, const std::string& origin);
QuantumRingSlice load_ring(const std::filesystem::path& file);
std::string serialize_ring(const QuantumRingSlice& ring);

/* complex files: p/m headers, [degrees], [d DEG], optional [sigma DEG],
   optional [cocycle] (degree, then one line of entries). */
struct ComplexFile {
    long p = 2, m = 1;
    GradedComplex complex;
    std::map<long, IMatrix> sigma;
    std::optional<long> cocycle_degree;
    std::vector<Int> cocycle;
};

ComplexFile parse_complex(const std::string& text, const std::string& origin);
ComplexFile load_complex(const std::filesystem::path& file);

// cochain expressions: "t^2 + 3*t^1*theta - theta"
BGammaCochain parse_bgamma_cochain(const std::string& expr, long p, long m);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, const std::string& content);

} // namespace qconn
