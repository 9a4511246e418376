#pragma once

// Argument parsing, canonical rendering and dispatch for the rrt-ldp tool.

#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrt::cli {

/// Bad or missing flag. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help anywhere on the command line; carries the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResourceLimit = 3;

inline constexpr const char* kSchema = "rrt-ldp/1";

struct RunPlan {
  std::string command;
  /// Flag name (without dashes) -> canonical value text. Defaults are filled in.
  std::map<std::string, std::string> params;
  Format format = Format::csv;
  /// Empty means standard output.
  std::string output;

  friend bool operator==(const RunPlan&, const RunPlan&) = default;
};

std::vector<std::string> command_names();

/// Tokens exclude the program name. Throws UsageError or HelpRequested.
RunPlan parse_args(std::span<const std::string> tokens);

/// Canonical token sequence; parse_args(render(plan)) == plan.
std::vector<std::string> render(const RunPlan& plan);

/// render() joined by single spaces.
std::string canonical_string(const RunPlan& plan);

/// Runs a validated plan, writing the artifact to `out` (or plan.output).
/// Returns kExitOk or kExitVerifyFailed; exceptions propagate.
int execute(const RunPlan& plan, std::ostream& out, std::ostream& diag);

/// parse_args + execute with every failure mapped to its exit code.
int run(std::span<const std::string> tokens, std::ostream& out, std::ostream& diag);

}  // namespace rrt::cli
