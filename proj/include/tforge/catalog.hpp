#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tforge/geometry.hpp"

namespace tforge {

// Built-in spacetimes, by name.
std::vector<std::string> catalogNames();
GeometryDefinition catalogGeometry(const std::string& name);

// Geometry JSON: {name, coordinates[4], parameters{name:default}, tetrad
// 4x4 expression strings indexed [mu][a], domain{coord:[lo,hi]}, exclude[]}.
// A point is excluded when any exclude expression evaluates > 0.
GeometryDefinition parseGeometryJson(const std::string& text);
GeometryDefinition loadGeometryFile(const std::string& path);

// Full diagnostics instead of the first error: schema problems, expression
// errors, then 100 sampled points checked for tetrad nondegeneracy and
// metric signature. Empty result means the file is usable.
std::vector<std::string> validateGeometryText(const std::string& text);
std::vector<std::string> validateGeometryFile(const std::string& path);

// raw JSON shipped for each built-in, mirrored under data/geometries/
const std::vector<std::pair<std::string, const char*>>& builtinGeometryJson();

}  // namespace tforge
