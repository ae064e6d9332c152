#pragma once

namespace qconn {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* report_schema = "qconn-report 1";

} // namespace qconn
