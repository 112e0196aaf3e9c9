#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curvedcc/ccstat.hpp"

namespace curvedcc::cli {

// Process exit statuses shared by every command.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,  // usage error, or the verified file is not a central configuration
  exit_parse = 2,
  exit_singular = 3,
  exit_releq_unverified = 4,
  exit_mode_mismatch = 5,
};

struct VerifyOptions {
  std::filesystem::path file;
  std::optional<double> lambda;  // fitted when empty
  double tol = tol::cc;
  CCTolerances tolerances{};
};

struct FamilyOptions {
  std::optional<double> c;
  std::optional<double> theta;
  int n = 3;
  int grid = 0;
  bool special_curve = false;
  std::vector<double> c_values;  // special-curve abscissae; defaults to -0.9, -0.8, ..., -0.1
  std::optional<std::filesystem::path> out;
};

struct SolveCommandOptions {
  int sigma = 1;
  std::vector<double> masses;
  std::uint64_t seed = 0;
  int trials = 10;
  int max_iter = 2000;
  std::optional<std::filesystem::path> out;
};

struct IntegrateOptions {
  std::filesystem::path file;
  double dt = 1e-3;
  double t_end = 10.0;
  std::optional<double> releq;  // spin parameter s; velocities from the file when empty
  int stride = 1;
  double tol = tol::cc;
  std::optional<std::filesystem::path> out;
};

struct ProjectOptions {
  std::filesystem::path file;
  std::string mode = "stereographic";
  std::optional<std::filesystem::path> out;
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_family(const FamilyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveCommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_integrate(const IntegrateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err);

/// Parses `args` (program name first) and dispatches to a subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvedcc::cli
