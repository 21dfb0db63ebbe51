#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace multipoint {

enum class OutputFormat { text, json };

/// Parsed and validated command-line request.
struct RunSpec {
  std::string command;  // eqs | dim | charts | check
  std::vector<std::string> vars;
  std::string map_text;  // ';'-separated, empty when --map was not given
  int r = 2;
  std::optional<int> ell;     // defaults to r
  std::optional<int> params;  // nullopt = auto
  std::string collection = "default";
  OutputFormat format = OutputFormat::text;
  std::vector<std::vector<int>> charts;
  std::string suite = "all";
  std::uint64_t seed = 1;
  int trials = 20;
  int jobs = 1;
  bool corrupt = false;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line. Never throws; errors become messages on `err`
/// plus the matching exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color = false);

/// True unless MULTIPOINT_NO_COLOR is set or stdout is not a terminal.
bool stdout_wants_color();

}  // namespace multipoint
