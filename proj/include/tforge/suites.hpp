#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tforge/geometry.hpp"

namespace tforge {

inline constexpr const char* kToolVersion = "0.1.0";

// One identity verified over the sampled points.
struct CheckRecord {
  std::string id;
  int points = 0;
  double maxResidual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

// Deterministic run summary: identical inputs and seed give an identical
// report apart from the wall time.
struct SuiteReport {
  std::string version = kToolVersion;
  std::string geometry;
  std::string suite;
  std::uint64_t seed = 0;
  int points = 0;
  std::vector<CheckRecord> checks;
  bool pass = true;
  double wallMs = 0.0;
};

// Registry entry: which suite owns the check and its default tolerance.
struct CheckDef {
  const char* id;
  const char* suite;
  double tolerance;
};

// Every identity the library asserts, each under exactly one id.
const std::vector<CheckDef>& checkRegistry();

// Suite names accepted by runSuite, not counting "all".
const std::vector<std::string>& suiteNames();

// Throws when the registry has duplicate ids, an unknown suite name, or is
// missing one of the frozen core identities.
void assertRegistryConsistent();

// Sub-seed for one sampled point; folds the index into the run seed.
std::uint64_t pointSeed(std::uint64_t seed, int pointIndex);

// Thread cap: TETRAD_FORGE_THREADS when set (at least 1), otherwise the
// hardware concurrency.
int threadCap();

// Runs the named suite ("all" or one of suiteNames()) at `points` sampled
// points. Tolerance overrides are keyed by check id. Throws GeometryError
// on an unknown suite or tolerance key.
SuiteReport runSuite(const GeometryInstance& geo, const std::string& suite, int points,
                     std::uint64_t seed, const std::map<std::string, double>& tolOverrides = {});

std::string renderJson(const SuiteReport& rep);
std::string renderHuman(const SuiteReport& rep);

}  // namespace tforge
