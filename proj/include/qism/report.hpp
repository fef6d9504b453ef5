#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qism/numerics.hpp"

namespace qism {

/// One line of a run report. `pass` is residual <= tolerance (false for NaN).
struct CheckResult {
    std::string name;
    std::vector<Complex> values;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

CheckResult make_check(std::string name, std::vector<Complex> values, double residual, double tolerance);
/// A reported value with no comparison attached; always passes.
CheckResult make_value(std::string name, std::vector<Complex> values);
/// A failed check carrying an error message instead of a residual.
CheckResult failed_check(std::string name, std::string note);

struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<CheckResult> results;
    std::uint64_t seed = 0;
    std::int64_t elapsed_ms = 0;

    bool all_pass() const;
    /// Flat JSON object with keys command, params, results, seed, elapsed_ms.
    std::string to_json() const;
};

/// Parses `[-]a[+|-]bi` with either part optional: "0.3", "-2.5e-3+1i", "i", "-0.7i".
/// Throws InvalidArgument on anything else, including whitespace and non-finite parts.
Complex parse_complex(std::string_view text);
/// Comma-separated list of complex literals. An empty string gives an empty list.
std::vector<Complex> parse_complex_list(std::string_view text);

/// Round-trip formatting in the grammar accepted by parse_complex, e.g. "0.5-1.25i".
std::string format_complex(Complex z);
std::string format_complex_list(const std::vector<Complex>& values);

}  // namespace qism
