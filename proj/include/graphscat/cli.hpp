#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "graphscat/io.hpp"
#include "graphscat/wavelets.hpp"

namespace graphscat {

enum class Subcommand { Features, FrameCheck, Stability, Verify, Spectra };

std::string to_string(Subcommand s);

struct CliConfig {
  Subcommand subcommand = Subcommand::Features;
  std::filesystem::path graph;
  std::filesystem::path graph_b;
  std::filesystem::path signal;
  std::filesystem::path out;
  std::filesystem::path dump;
  int J = 3;
  int min_layer = 0;
  int max_layer = 2;
  std::optional<FrameKind> kind;  // features/frame-check: tight, stability: poly
  std::string M = "identity";     // identity|dsqrt|dinvsqrt|file:PATH
  std::string g = "gstar";        // gstar|table:PATH
  std::string mu = "u0";          // u0|ones|file:PATH
  std::string perm = "identity";  // identity|search|exhaustive|file:PATH
  int index_base = 0;
  std::uint64_t seed = 1;
  int trials = 100;
  int threads = 0;
  double tol = 1e-9;
  std::optional<Format> format;
};

// Exit codes of the executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// args excludes the program name. Throws Error(UsageError) on bad input,
// including unreadable paths.
CliConfig parse_cli(const std::vector<std::string>& args);
CliConfig parse_cli(int argc, const char* const* argv);

int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Full entry point: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace graphscat
