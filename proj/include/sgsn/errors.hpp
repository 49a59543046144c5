#pragma once

#include <stdexcept>
#include <string>

namespace sgsn {

// Invalid or out-of-range parameters (grid sizes, CFL violations, bad angles).
struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// NaN/Inf encountered in numeric data.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Zero pivot in a tridiagonal or dense solve.
struct singular_error : std::runtime_error {
    explicit singular_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Norm drift past the per-step threshold; the run is aborted.
struct instability_error : std::runtime_error {
    explicit instability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed configuration document; carries a 1-based line number (0 = no line).
struct parse_error : std::runtime_error {
    int line;
    parse_error(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

} // namespace sgsn
