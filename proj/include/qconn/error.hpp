#pragma once

#include <stdexcept>
#include <string>

namespace qconn {

enum class Errc {
    non_integral,
    order_mismatch,
    zero_series,
    size_mismatch,
    singular_leading_term,
    singular_matrix,
    non_split_spectrum,
    precondition_violated,
    grading_violation,
    associativity_failure,
    unit_failure,
    empty_slice,
    not_a_cocycle,
    odd_degree,
    window_too_narrow,
    config_cap,
    parse_error,
};

/* Single exception type; the code tells callers (and tests) what went wrong,
   the message names the offending input. */
struct Error : std::runtime_error {
    Errc code;
    Error(Errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

const char* errc_name(Errc c);

} // namespace qconn
