#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qconn/series_checks.hpp"

namespace qconn {

std::string fnv1a64_hex(const std::string& bytes);

/* Deterministic structured-text run report. The verdict body is byte-stable
   for fixed inputs and tool version; timing goes in a trailing section that
   is excluded from the body digest. */
class RunReport {
public:
    explicit RunReport(std::string command_echo);

    void add_input(const std::string& name, const std::string& bytes);
    void kv(const std::string& key, const std::string& value);
    void line(const std::string& text);
    void section(const std::string& name);

    std::string body() const;            // schema + header + verdicts
    std::string digest() const;          // fnv1a64 of body()
    std::string full(long elapsed_ms) const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> lines_;
};

/* Static SVG plot of a Newton polygon: valuation points and the lower hull. */
std::string newton_polygon_svg(const NewtonPolygonReport& rep);

} // namespace qconn
