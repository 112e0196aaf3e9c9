#include "curvedcc/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "curvedcc/errors.hpp"
#include "json.hpp"

namespace curvedcc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::invalid_config, what); }

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + " is not finite");
  return v;
}

std::vector<AmbientVector> vectors_at(const json& j, const std::string& key) {
  if (!j.is_array()) fail("'" + key + "' must be an array");
  std::vector<AmbientVector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    const std::string where = key + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != 4) fail(where + " must be an array of 4 numbers");
    AmbientVector v;
    for (int c = 0; c < 4; ++c) v[c] = number_at(row[c], where + "[" + std::to_string(c) + "]");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ConfigFile parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(std::string("malformed configuration: ") + e.what());
  }
  if (!doc.is_object()) fail("configuration must be an object");
  static const std::set<std::string> known{"sigma", "masses", "positions", "velocities"};
  for (const auto& item : doc.items())
    if (!known.count(item.key())) fail("unknown field '" + item.key() + "'");
  for (const char* key : {"sigma", "masses", "positions"})
    if (!doc.contains(key)) fail(std::string("missing field '") + key + "'");

  const auto& sigma = doc["sigma"];
  if (!sigma.is_number_integer() || (sigma.get<long>() != 1 && sigma.get<long>() != -1)) fail("'sigma' must be 1 or -1");

  ConfigFile file;
  file.config.curvature = curvature_from_int(static_cast<int>(sigma.get<long>()));
  if (!doc["masses"].is_array()) fail("'masses' must be an array");
  for (std::size_t i = 0; i < doc["masses"].size(); ++i)
    file.config.masses.push_back(number_at(doc["masses"][i], "masses[" + std::to_string(i) + "]"));
  file.config.positions = vectors_at(doc["positions"], "positions");
  if (file.config.masses.size() != file.config.positions.size()) fail("'masses' and 'positions' differ in length");
  if (doc.contains("velocities")) {
    file.velocities = vectors_at(doc["velocities"], "velocities");
    if (file.velocities->size() != file.config.size()) fail("'velocities' and 'positions' differ in length");
  }
  validate(file.config);
  if (file.velocities) validate(PhaseState{file.config, *file.velocities});
  return file;
}

ConfigFile read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const Configuration& config, const std::vector<AmbientVector>* velocities) {
  std::ostringstream out;
  auto vectors = [&](const std::vector<AmbientVector>& vs) {
    out << "[\n";
    for (std::size_t i = 0; i < vs.size(); ++i) {
      out << "    [" << format_number(vs[i].x) << ", " << format_number(vs[i].y) << ", " << format_number(vs[i].z) << ", "
          << format_number(vs[i].w) << "]" << (i + 1 < vs.size() ? ",\n" : "\n");
    }
    out << "  ]";
  };
  out << "{\n  \"sigma\": " << static_cast<int>(config.curvature) << ",\n  \"masses\": [";
  for (std::size_t i = 0; i < config.masses.size(); ++i) out << (i ? ", " : "") << format_number(config.masses[i]);
  out << "],\n  \"positions\": ";
  vectors(config.positions);
  if (velocities) {
    out << ",\n  \"velocities\": ";
    vectors(*velocities);
  }
  out << "\n}\n";
  return out.str();
}

void write_config_file(const std::filesystem::path& path, const Configuration& config,
                       const std::vector<AmbientVector>* velocities) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  out << format_config(config, velocities);
}

}  // namespace curvedcc
