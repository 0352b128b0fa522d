#include <cstdlib>
#include <set>

#include <doctest.h>
#include <json.hpp>

#include "tforge/catalog.hpp"
#include "tforge/suites.hpp"

using namespace tforge;

namespace {

GeometryInstance geometry(const std::string& name) {
  return GeometryInstance(catalogGeometry(name));
}

bool sameChecks(const SuiteReport& a, const SuiteReport& b) {
  if (a.checks.size() != b.checks.size()) return false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    const CheckRecord& ca = a.checks[i];
    const CheckRecord& cb = b.checks[i];
    if (ca.id != cb.id || ca.points != cb.points || ca.maxResidual != cb.maxResidual ||
        ca.tolerance != cb.tolerance || ca.pass != cb.pass)
      return false;
  }
  return true;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value)
      ::setenv("TETRAD_FORGE_THREADS", value, 1);
    else
      ::unsetenv("TETRAD_FORGE_THREADS");
  }
  ~EnvGuard() { ::unsetenv("TETRAD_FORGE_THREADS"); }
};

}  // namespace

TEST_CASE("check registry is consistent and covers every suite") {
  CHECK_NOTHROW(assertRegistryConsistent());

  const auto& names = suiteNames();
  CHECK(names == std::vector<std::string>{"clifford", "geometry", "connection", "dirac",
                                          "lagrangian"});

  std::set<std::string> ids;
  std::map<std::string, int> perSuite;
  for (const CheckDef& def : checkRegistry()) {
    CHECK(ids.insert(def.id).second);
    CHECK(def.tolerance >= 0.0);
    perSuite[def.suite]++;
    const std::string id = def.id;
    CHECK(id.substr(0, id.find('.')) == def.suite);
  }
  for (const auto& name : names) CHECK(perSuite[name] > 0);
}

TEST_CASE("point seeds are deterministic and spread") {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t s = pointSeed(42, i);
    CHECK(s == pointSeed(42, i));
    CHECK(seen.insert(s).second);
  }
  CHECK(pointSeed(1, 0) != pointSeed(2, 0));
}

TEST_CASE("thread cap follows the environment override") {
  {
    EnvGuard guard("3");
    CHECK(threadCap() == 3);
  }
  {
    EnvGuard guard("0");
    CHECK(threadCap() == 1);
  }
  {
    EnvGuard guard(nullptr);
    CHECK(threadCap() >= 1);
  }
}

TEST_CASE("every suite passes on the catalog geometries") {
  for (const auto& name : {"minkowski", "schwarzschild", "flrw"}) {
    const GeometryInstance geo = geometry(name);
    const SuiteReport rep = runSuite(geo, "all", 4, 42);
    CHECK(rep.geometry == name);
    CHECK(rep.suite == "all");
    CHECK(rep.seed == 42);
    CHECK(rep.points == 4);
    CHECK(rep.checks.size() == checkRegistry().size());
    for (const CheckRecord& c : rep.checks) {
      INFO(rep.geometry << " " << c.id);
      CHECK(c.points == 4);
      CHECK(c.pass);
    }
    CHECK(rep.pass);
  }
}

TEST_CASE("a single suite selects exactly its own checks") {
  const GeometryInstance geo = geometry("rindler");
  for (const auto& suite : suiteNames()) {
    const SuiteReport rep = runSuite(geo, suite, 2, 9);
    CHECK(!rep.checks.empty());
    for (const CheckRecord& c : rep.checks)
      CHECK(c.id.substr(0, c.id.find('.')) == suite);
    int expected = 0;
    for (const CheckDef& def : checkRegistry())
      if (suite == def.suite) ++expected;
    CHECK(static_cast<int>(rep.checks.size()) == expected);
    CHECK(rep.pass);
  }
}

TEST_CASE("reports are reproducible for a fixed seed") {
  const GeometryInstance geo = geometry("de-sitter-static");
  const SuiteReport a = runSuite(geo, "all", 3, 77);
  const SuiteReport b = runSuite(geo, "all", 3, 77);
  CHECK(sameChecks(a, b));
  CHECK(a.pass == b.pass);

  const SuiteReport c = runSuite(geo, "all", 3, 78);
  bool identical = sameChecks(a, c);
  CHECK(!identical);
}

TEST_CASE("results do not depend on the thread count") {
  const GeometryInstance geo = geometry("minkowski-spherical");
  SuiteReport serial, parallel;
  {
    EnvGuard guard("1");
    serial = runSuite(geo, "connection", 6, 5);
  }
  {
    EnvGuard guard("4");
    parallel = runSuite(geo, "connection", 6, 5);
  }
  CHECK(sameChecks(serial, parallel));
}

TEST_CASE("invalid suite arguments are rejected") {
  const GeometryInstance geo = geometry("minkowski");
  CHECK_THROWS_AS(runSuite(geo, "tetrad", 2, 1), GeometryError);
  CHECK_THROWS_AS(runSuite(geo, "frobnicate", 2, 1), GeometryError);
  CHECK_THROWS_AS(runSuite(geo, "all", 0, 1), GeometryError);
  CHECK_THROWS_AS(runSuite(geo, "all", -3, 1), GeometryError);
  CHECK_THROWS_AS(runSuite(geo, "all", 2, 1, {{"clifford.bogus", 1e-9}}), GeometryError);
  CHECK_THROWS_AS(runSuite(geo, "all", 2, 1, {{"clifford.frame-norm", -1.0}}), GeometryError);
}

TEST_CASE("tolerance overrides replace the registry defaults") {
  const GeometryInstance geo = geometry("schwarzschild");
  const SuiteReport rep =
      runSuite(geo, "geometry", 3, 11, {{"geometry.oracle-agreement", 1e-30}});
  bool sawOverride = false;
  for (const CheckRecord& c : rep.checks)
    if (c.id == "geometry.oracle-agreement") {
      sawOverride = true;
      CHECK(c.tolerance == 1e-30);
      CHECK(c.maxResidual > 1e-30);
      CHECK(!c.pass);
    }
  CHECK(sawOverride);
  CHECK(!rep.pass);
}

TEST_CASE("json report round-trips the record fields") {
  const GeometryInstance geo = geometry("flrw");
  const SuiteReport rep = runSuite(geo, "dirac", 2, 3);
  const nlohmann::json j = nlohmann::json::parse(renderJson(rep));
  CHECK(j["version"] == rep.version);
  CHECK(j["geometry"] == "flrw");
  CHECK(j["suite"] == "dirac");
  CHECK(j["seed"] == 3);
  CHECK(j["points"] == 2);
  CHECK(j["pass"] == rep.pass);
  CHECK(j["checks"].size() == rep.checks.size());
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    CHECK(j["checks"][i]["id"] == rep.checks[i].id);
    CHECK(j["checks"][i]["max_residual"] == rep.checks[i].maxResidual);
    CHECK(j["checks"][i]["tolerance"] == rep.checks[i].tolerance);
    CHECK(j["checks"][i]["pass"] == rep.checks[i].pass);
  }
}

TEST_CASE("human report lists one line per check with a verdict") {
  const GeometryInstance geo = geometry("minkowski");
  const SuiteReport rep = runSuite(geo, "clifford", 2, 3);
  const std::string text = renderHuman(rep);
  CHECK(text.find("minkowski") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
  for (const CheckRecord& c : rep.checks) CHECK(text.find(c.id) != std::string::npos);
}
