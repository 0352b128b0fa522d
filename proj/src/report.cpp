#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "tforge/suites.hpp"

namespace tforge {
namespace {

std::string shortDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

}  // namespace

std::string renderJson(const SuiteReport& rep) {
  nlohmann::json j;
  j["version"] = rep.version;
  j["geometry"] = rep.geometry;
  j["suite"] = rep.suite;
  j["seed"] = rep.seed;
  j["points"] = rep.points;
  j["pass"] = rep.pass;
  j["wall_ms"] = rep.wallMs;
  j["checks"] = nlohmann::json::array();
  for (const CheckRecord& c : rep.checks) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["points"] = c.points;
    jc["max_residual"] = c.maxResidual;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    j["checks"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

std::string renderHuman(const SuiteReport& rep) {
  std::size_t idWidth = 2;
  for (const CheckRecord& c : rep.checks) idWidth = std::max(idWidth, c.id.size());

  std::ostringstream out;
  out << "geometry " << rep.geometry << "  suite " << rep.suite << "  points " << rep.points
      << "  seed " << rep.seed << "\n";
  out << std::string(idWidth, '-') << "--------------------------------------\n";
  for (const CheckRecord& c : rep.checks) {
    out << c.id << std::string(idWidth - c.id.size(), ' ') << "  "
        << shortDouble(c.maxResidual) << "  <= " << shortDouble(c.tolerance) << "  "
        << (c.pass ? "pass" : "FAIL") << "\n";
  }
  out << std::string(idWidth, '-') << "--------------------------------------\n";
  out << (rep.pass ? "PASS" : "FAIL") << "  (" << rep.checks.size() << " checks, "
      << shortDouble(rep.wallMs) << " ms)\n";
  return out.str();
}

}  // namespace tforge
