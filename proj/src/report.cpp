#include "qconn/report.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "qconn/version.hpp"

namespace qconn {

std::string fnv1a64_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4) os << ((h >> shift) & 0xf);
    return os.str();
}

RunReport::RunReport(std::string command_echo)
{
    header_.push_back(report_schema);
    header_.push_back(std::string("tool: qconn ") + tool_version);
    header_.push_back("command: " + command_echo);
}

void RunReport::add_input(const std::string& name, const std::string& bytes)
{
    header_.push_back("input: " + name + " fnv1a64=" + fnv1a64_hex(bytes));
}

void RunReport::kv(const std::string& key, const std::string& value)
{
    lines_.push_back(key + ": " + value);
}

void RunReport::line(const std::string& text)
{
    lines_.push_back(text);
}

void RunReport::section(const std::string& name)
{
    lines_.push_back("-- " + name + " --");
}

std::string RunReport::body() const
{
    std::ostringstream os;
    for (const auto& l : header_) os << l << "\n";
    for (const auto& l : lines_) os << l << "\n";
    return os.str();
}

std::string RunReport::digest() const
{
    return fnv1a64_hex(body());
}

std::string RunReport::full(long elapsed_ms) const
{
    std::ostringstream os;
    os << body();
    os << "-- timing --\n";
    os << "elapsed_ms: " << elapsed_ms << "\n";
    return os.str();
}

std::string newton_polygon_svg(const NewtonPolygonReport& rep)
{
    long kmax = 1, vmax = 1, vmin = 0;
    for (const auto& pt : rep.points) {
        kmax = std::max(kmax, pt.k);
        vmax = std::max(vmax, pt.val);
        vmin = std::min(vmin, pt.val);
    }
    const double w = 640, h = 400, margin = 40;
    auto x = [&](long k) { return margin + (w - 2 * margin) * static_cast<double>(k) / static_cast<double>(kmax); };
    auto y = [&](long v) {
        return h - margin - (h - 2 * margin) * static_cast<double>(v - vmin) / static_cast<double>(vmax - vmin ? vmax - vmin : 1);
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << y(0) << "\" x2=\"" << w - margin << "\" y2=\""
       << y(0) << "\" stroke=\"#999\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << h - margin << "\" stroke=\"#999\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& pt : rep.hull) os << x(pt.k) << "," << y(pt.val) << " ";
    os << "\"/>\n";
    for (const auto& pt : rep.points)
        os << "<circle cx=\"" << x(pt.k) << "\" cy=\"" << y(pt.val)
           << "\" r=\"3\" fill=\"#d62728\"/>\n";
    os << "<text x=\"" << w - margin << "\" y=\"" << h - margin / 2
       << "\" text-anchor=\"end\" font-size=\"12\">k</text>\n";
    os << "<text x=\"" << margin / 2 << "\" y=\"" << margin
       << "\" font-size=\"12\">val</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace qconn
