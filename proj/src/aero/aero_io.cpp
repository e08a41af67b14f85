#include "fepsim/aero/aero_model.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace fepsim::aero {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "fepsim-aero";
constexpr const char* kManifestFormat = "fepsim-aero-manifest";
constexpr int kSupportedVersion = 1;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RateFactor rate_from_string(const std::string& s) {
  if (s == "none") return RateFactor::None;
  if (s == "p") return RateFactor::P;
  if (s == "q") return RateFactor::Q;
  if (s == "r") return RateFactor::R;
  throw ConfigError("unknown rate factor '" + s + "' (expected none, p, q or r)");
}

const char* rate_to_string(RateFactor r) {
  switch (r) {
    case RateFactor::P: return "p";
    case RateFactor::Q: return "q";
    case RateFactor::R: return "r";
    case RateFactor::None: break;
  }
  return "none";
}

Coefficient coefficient_from_string(const std::string& s) {
  for (std::size_t i = 0; i < kCoefficientCount; ++i) {
    if (to_string(static_cast<Coefficient>(i)) == s) {
      return static_cast<Coefficient>(i);
    }
  }
  throw ConfigError("unknown coefficient '" + s + "'");
}

void check_header(const json& j, const char* format) {
  if (j.value("format", std::string{}) != format) {
    throw ConfigError(std::string("expected format '") + format + "'");
  }
  if (!j.contains("version")) {
    throw ConfigError("missing mandatory 'version' field");
  }
  if (j.at("version").get<int>() != kSupportedVersion) {
    throw ConfigError("unsupported version " + j.at("version").dump());
  }
}

ValidityEnvelope parse_envelope(const json& e) {
  ValidityEnvelope env;
  const auto alpha = e.at("alpha_deg").get<std::vector<double>>();
  const auto beta = e.at("beta_deg").get<std::vector<double>>();
  if (alpha.size() != 2 || beta.size() != 2 || !(alpha[0] < alpha[1]) || !(beta[0] < beta[1])) {
    throw ConfigError("envelope: alpha_deg and beta_deg must be increasing [min, max] pairs");
  }
  env.alpha_min = alpha[0];
  env.alpha_max = alpha[1];
  env.beta_min = beta[0];
  env.beta_max = beta[1];
  env.mach_max = e.at("mach_max").get<double>();
  if (!(env.mach_max > 0.0)) {
    throw ConfigError("envelope: mach_max must be positive");
  }
  return env;
}

std::vector<Axis> parse_axes(const json& j) {
  std::vector<Axis> axes;
  for (const auto& a : j) {
    axes.push_back(axis_from_string(a.get<std::string>()));
  }
  return axes;
}

}  // namespace

AeroTables parse_aero_tables(const std::string& text) {
  AeroTables tables;
  try {
    const json j = json::parse(text);
    check_header(j, kFormat);
    tables.version = j.at("version").get<int>();
    tables.name = j.value("name", std::string{});
    tables.envelope = parse_envelope(j.at("envelope"));
    for (const auto& [name, terms] : j.at("coefficients").items()) {
      const Coefficient c = coefficient_from_string(name);
      for (const auto& t : terms) {
        CoefficientTerm term;
        term.table = GridTable(parse_axes(t.at("axes")),
                               t.at("breakpoints").get<std::vector<std::vector<double>>>(),
                               t.at("values").get<std::vector<double>>());
        term.rate = rate_from_string(t.value("rate", std::string("none")));
        tables[c].push_back(std::move(term));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("aero tables: ") + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("aero tables: ") + e.what());
  }
  return tables;
}

AeroTables load_aero_tables(const std::filesystem::path& path) {
  try {
    return parse_aero_tables(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_aero_tables(const AeroTables& tables) {
  json j;
  j["format"] = kFormat;
  j["version"] = tables.version;
  j["name"] = tables.name;
  const auto& e = tables.envelope;
  j["envelope"] = {{"alpha_deg", {e.alpha_min, e.alpha_max}},
                   {"beta_deg", {e.beta_min, e.beta_max}},
                   {"mach_max", e.mach_max}};
  json coefficients = json::object();
  for (std::size_t k = 0; k < kCoefficientCount; ++k) {
    json list = json::array();
    for (const auto& term : tables.terms[k]) {
      json axes = json::array();
      for (Axis a : term.table.axes()) {
        axes.push_back(to_string(a));
      }
      list.push_back({{"axes", axes},
                      {"breakpoints", term.table.breakpoints()},
                      {"values", term.table.values()},
                      {"rate", rate_to_string(term.rate)}});
    }
    coefficients[to_string(static_cast<Coefficient>(k))] = list;
  }
  j["coefficients"] = coefficients;
  return j.dump(1);
}

AeroTables import_aero_manifest(const std::filesystem::path& manifest) {
  AeroTables tables;
  const auto base = manifest.parent_path();
  try {
    const json j = json::parse(read_file(manifest));
    check_header(j, kManifestFormat);
    tables.name = j.value("name", std::string{});
    tables.envelope = parse_envelope(j.at("envelope"));
    for (const auto& t : j.at("terms")) {
      const auto axes = parse_axes(t.at("axes"));
      const auto breakpoints = t.at("breakpoints").get<std::vector<std::vector<double>>>();
      const double scale = t.value("scale", 1.0);
      const bool transpose = t.value("transpose", false);

      std::vector<double> raw;
      std::istringstream in(read_file(base / t.at("file").get<std::string>()));
      for (double v; in >> v;) {
        raw.push_back(v * scale);
      }
      if (!in.eof()) {
        throw ConfigError("non-numeric token in " + t.at("file").get<std::string>());
      }
      std::vector<double> values = raw;
      if (transpose) {
        if (axes.size() != 2) {
          throw ConfigError("transpose is only defined for two-axis grids");
        }
        const std::size_t rows = breakpoints[0].size();
        const std::size_t cols = breakpoints[1].size();
        if (raw.size() != rows * cols) {
          throw ConfigError("grid file " + t.at("file").get<std::string>() + " has " +
                            std::to_string(raw.size()) + " values, expected " +
                            std::to_string(rows * cols));
        }
        // the file lists the first axis fastest
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < cols; ++c) {
            values[r * cols + c] = raw[c * rows + r];
          }
        }
      }
      CoefficientTerm term;
      term.table = GridTable(axes, breakpoints, std::move(values));
      term.rate = rate_from_string(t.value("rate", std::string("none")));
      tables[coefficient_from_string(t.at("coefficient").get<std::string>())].push_back(
          std::move(term));
    }
  } catch (const json::exception& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  return tables;
}

}  // namespace fepsim::aero
