#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvedcc/dynamics.hpp"

namespace curvedcc {

/// Contents of a configuration file:
///
///   {"sigma": 1, "masses": [m...], "positions": [[x,y,z,w]...],
///    "velocities": [[x,y,z,w]...]}          // velocities optional
///
/// Unknown fields are rejected.
struct ConfigFile {
  Configuration config;
  std::optional<std::vector<AmbientVector>> velocities;
};

/// Throws Error(invalid_config) on malformed input and SingularPairError
/// when two bodies collide or are antipodal.
ConfigFile parse_config(std::string_view text);
ConfigFile read_config_file(const std::filesystem::path& path);

/// Numbers are written with 17 significant digits.
std::string format_config(const Configuration& config, const std::vector<AmbientVector>* velocities = nullptr);
void write_config_file(const std::filesystem::path& path, const Configuration& config,
                       const std::vector<AmbientVector>* velocities = nullptr);

/// "%.17g"
std::string format_number(double v);

}  // namespace curvedcc
