#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncfree::cli {

enum class Command { VerifyConjugate, Duality, Reduce, Relations, Spectrum, Margins, Report };
enum class Format { Structured, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::Report;
  std::string spec_path;
  std::optional<int> degree;
  std::optional<std::uint64_t> seed;  // overrides the ensemble seed
  std::string out_path;               // empty: stdout
  Format format = Format::Structured;
  std::optional<std::string> xi;      // "xi_1;...;xi_n"
  std::optional<std::string> poly;    // duality takes "P1;P2", margins "Y1" or "Y1;Y2"
  std::optional<std::string> word;    // "i1,i2,..."
  std::optional<std::string> projections;  // reduce: "p1;...;pd" polynomial surrogates
  int index = 1;
  std::size_t bins = 80;
  double window_constant = 4.0;
  int lanczos_steps = 80;
  double slack = 0.05;
};

std::string command_name(Command c);

/// Parses argv. On --help, or on a usage error, returns nullopt and sets exit_code (0 or 2);
/// messages go to `err`.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

/// Executes one command. Exit status 0 on success, 1 on a failed verification (the report is
/// still written), 2 on usage or configuration errors including exceeded degree bounds.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace ncfree::cli
