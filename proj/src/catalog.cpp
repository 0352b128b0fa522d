#include "tforge/catalog.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace tforge {
namespace {

using nlohmann::json;

std::string pointString(const SymbolTable& symbols, const std::array<double, 4>& x) {
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < 4; ++k) {
    if (k) os << ", ";
    os << symbols.coordinates[k] << "=" << x[k];
  }
  os << ")";
  return os.str();
}

// schema + expression pass; geometry is usable iff no diagnostics
bool parseInto(const std::string& text, GeometryDefinition& out, std::vector<std::string>& diags) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    diags.push_back(std::string("not valid JSON: ") + e.what());
    return false;
  }
  if (!j.is_object()) {
    diags.push_back("top level must be a JSON object");
    return false;
  }

  if (!j.contains("name") || !j["name"].is_string())
    diags.push_back("missing string field 'name'");
  else
    out.name = j["name"].get<std::string>();

  if (!j.contains("coordinates") || !j["coordinates"].is_array() || j["coordinates"].size() != 4) {
    diags.push_back("'coordinates' must be an array of 4 names");
    return false;
  }
  for (int k = 0; k < 4; ++k) {
    if (!j["coordinates"][k].is_string()) {
      diags.push_back("'coordinates' must be an array of 4 names");
      return false;
    }
    out.symbols.coordinates[k] = j["coordinates"][k].get<std::string>();
  }

  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) {
      diags.push_back("'parameters' must be an object of name: default");
      return false;
    }
    for (auto& [k, v] : j["parameters"].items()) {
      if (!v.is_number()) {
        diags.push_back("parameter '" + k + "' default must be a number");
        continue;
      }
      out.symbols.parameters.push_back(k);
      out.defaults[k] = v.get<double>();
    }
  }

  bool tetradOk = true;
  if (!j.contains("tetrad") || !j["tetrad"].is_array() || j["tetrad"].size() != 4) {
    diags.push_back("'tetrad' must be a 4x4 array of expression strings");
    tetradOk = false;
  } else {
    for (int mu = 0; mu < 4 && tetradOk; ++mu) {
      if (!j["tetrad"][mu].is_array()) {
        diags.push_back("tetrad row " + std::to_string(mu) + " must be an array");
        tetradOk = false;
        break;
      }
      for (int a = 0; a < 4; ++a) {
        if (static_cast<std::size_t>(a) >= j["tetrad"][mu].size() || !j["tetrad"][mu][a].is_string()) {
          diags.push_back("missing component e_" + std::to_string(mu) + "^" + std::to_string(a));
          tetradOk = false;
          continue;
        }
        const std::string src = j["tetrad"][mu][a].get<std::string>();
        try {
          out.e[mu][a] = Expression::parse(src, out.symbols);
        } catch (const ParseError& pe) {
          diags.push_back("tetrad[" + std::to_string(mu) + "][" + std::to_string(a) + "] ('" + src +
                          "'): " + pe.what());
          tetradOk = false;
        }
      }
    }
  }

  if (!j.contains("domain") || !j["domain"].is_object()) {
    diags.push_back("'domain' must map each coordinate to [lo, hi]");
  } else {
    for (int k = 0; k < 4; ++k) {
      const std::string& c = out.symbols.coordinates[k];
      if (!j["domain"].contains(c) || !j["domain"][c].is_array() || j["domain"][c].size() != 2) {
        diags.push_back("domain is missing an interval for coordinate '" + c + "'");
        continue;
      }
      out.domain[k][0] = j["domain"][c][0].get<double>();
      out.domain[k][1] = j["domain"][c][1].get<double>();
      if (!(out.domain[k][0] < out.domain[k][1]))
        diags.push_back("domain interval for '" + c + "' must have lo < hi");
    }
  }

  if (j.contains("exclude")) {
    if (!j["exclude"].is_array()) {
      diags.push_back("'exclude' must be an array of expression strings");
    } else {
      for (const auto& item : j["exclude"]) {
        if (!item.is_string()) {
          diags.push_back("'exclude' entries must be strings");
          continue;
        }
        const std::string src = item.get<std::string>();
        try {
          out.exclude.push_back(Expression::parse(src, out.symbols));
        } catch (const ParseError& pe) {
          diags.push_back("exclude ('" + src + "'): " + pe.what());
        }
      }
    }
  }

  return diags.empty() && tetradOk;
}

void samplePoints(const GeometryDefinition& def, std::vector<std::string>& diags) {
  GeometryInstance geo(def);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int attempt = 0; attempt < 2000 && checked < 100; ++attempt) {
    std::array<double, 4> x;
    for (int k = 0; k < 4; ++k) x[k] = def.domain[k][0] + (def.domain[k][1] - def.domain[k][0]) * u(rng);
    bool excl;
    try {
      excl = geo.excluded(x);
    } catch (const Error& e) {
      diags.push_back(std::string("exclude expression failed at ") + pointString(def.symbols, x) + ": " + e.what());
      return;
    }
    if (excl) continue;
    ++checked;
    try {
      frameFromJet(geo.evalJet(x, 1));
    } catch (const Error& e) {
      diags.push_back(std::string(e.what()) + " at " + pointString(def.symbols, x));
      return;  // one representative point is enough
    }
  }
  if (checked == 0) diags.push_back("every sampled point fell in an excluded region");
}

const std::map<std::string, GeometryDefinition>& builtins() {
  static const std::map<std::string, GeometryDefinition> defs = [] {
    std::map<std::string, GeometryDefinition> m;
    for (const auto& [name, text] : builtinGeometryJson()) m.emplace(name, parseGeometryJson(text));
    return m;
  }();
  return defs;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeometryError("cannot open geometry file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::string> catalogNames() {
  std::vector<std::string> names;
  for (const auto& [name, text] : builtinGeometryJson()) names.push_back(name);
  return names;
}

GeometryDefinition catalogGeometry(const std::string& name) {
  const auto& defs = builtins();
  auto it = defs.find(name);
  if (it == defs.end()) throw GeometryError("unknown catalog geometry '" + name + "'");
  return it->second;
}

GeometryDefinition parseGeometryJson(const std::string& text) {
  GeometryDefinition def;
  std::vector<std::string> diags;
  if (!parseInto(text, def, diags)) throw GeometryError(diags.empty() ? "invalid geometry" : diags.front());
  return def;
}

GeometryDefinition loadGeometryFile(const std::string& path) { return parseGeometryJson(readFile(path)); }

std::vector<std::string> validateGeometryText(const std::string& text) {
  GeometryDefinition def;
  std::vector<std::string> diags;
  if (!parseInto(text, def, diags)) return diags;
  samplePoints(def, diags);
  return diags;
}

std::vector<std::string> validateGeometryFile(const std::string& path) {
  try {
    return validateGeometryText(readFile(path));
  } catch (const Error& e) {
    return {e.what()};
  }
}

}  // namespace tforge
