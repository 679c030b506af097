#pragma once

#include "pps/constants.hpp"
#include "pps/error.hpp"
#include "pps/frobenius.hpp"
#include "pps/spectrum.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pps {

/// Bad command line or config file; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

enum class Subcommand { spectrum, verify, sweep, wavefunction, constants };
enum class Format { csv, json };

std::string to_string(Subcommand s);

struct RunConfig {
    Subcommand subcommand = Subcommand::spectrum;
    std::vector<int> n_values{1};
    std::vector<double> alphas;   ///< absolute couplings, already resolved
    Method method = Method::exact;
    Format format = Format::csv;
    std::optional<std::string> out_path;
    double tol = 1e-10;
    std::optional<std::string> plot_path;
    PotentialSign sign = PotentialSign::attractive;
};

/// "3" -> {3}, "1..4" -> {1,2,3,4}, "1,4,9" -> {1,4,9}, "1..2,5" -> {1,2,5}.
std::vector<int> parse_n_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// args excludes the program name. Throws UsageError.
RunConfig parse_args(const std::vector<std::string>& args);

/// Writes results to config.out_path or `out`; diagnostics to `err`.
/// Returns 0 on success, 1 on a solver or I/O failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with usage errors reported on `err` as exit code 2.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pps
