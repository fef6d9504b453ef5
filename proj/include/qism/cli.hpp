#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qism/report.hpp"
#include "qism/vertex_weights.hpp"

namespace qism {

/// Invalid flag values or combinations; the command line exits with status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inputs shared by all subcommands. Unset optionals are drawn from the seed.
struct RunOptions {
    std::optional<ModelKind> model;
    std::optional<int> big_n, m, n;
    std::optional<Complex> gamma;
    std::optional<std::vector<Complex>> v, q, w, r, u, p;
    std::optional<int> trials;
    std::uint64_t seed = 1;
    std::optional<double> tol;
    bool solve_bethe = false;
    bool check_eigenvector = false;
    int threads = 1;
    /// Raw flags as given, echoed into the report.
    std::vector<std::pair<std::string, std::string>> echo;
};

inline constexpr std::string_view kVerifySuites[] = {"ybe", "crossing", "commutation", "dwpf", "scalar",
                                                    "hamiltonian", "all"};

/// Runs a verification suite. Trials may run on several threads; results are
/// ordered by trial index, so the report does not depend on the thread count.
RunReport cmd_verify(std::string_view suite, const RunOptions& options);
/// Evaluates z, sn or slavnov by every applicable route with pairwise gaps.
RunReport cmd_eval(std::string_view object, const RunOptions& options);
/// Solves the Bethe equations and reports each root set with its residual.
RunReport cmd_bethe(const RunOptions& options);

/// Human-readable summary; checks sharing a name up to '#' are grouped.
void print_summary(const RunReport& report, std::ostream& out);

/// Full command line: parses flags, runs the subcommand, prints the summary and
/// writes --json. Returns 0 when every check passes, 1 on a failed check or a
/// runtime error, 2 on invalid flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qism
