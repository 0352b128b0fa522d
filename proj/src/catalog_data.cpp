#include "tforge/catalog.hpp"

namespace tforge {
namespace {

const char* kMinkowski = R"json({
  "name": "minkowski",
  "coordinates": ["t", "x", "y", "z"],
  "parameters": {},
  "tetrad": [
    ["1", "0", "0", "0"],
    ["0", "1", "0", "0"],
    ["0", "0", "1", "0"],
    ["0", "0", "0", "1"]
  ],
  "domain": {
    "t": [-2.0, 2.0],
    "x": [-2.0, 2.0],
    "y": [-2.0, 2.0],
    "z": [-2.0, 2.0]
  },
  "exclude": []
}
)json";

const char* kMinkowskiSpherical = R"json({
  "name": "minkowski-spherical",
  "coordinates": ["t", "r", "th", "ph"],
  "parameters": {},
  "tetrad": [
    ["1", "0", "0", "0"],
    ["0", "1", "0", "0"],
    ["0", "0", "r", "0"],
    ["0", "0", "0", "r*sin(th)"]
  ],
  "domain": {
    "t": [-2.0, 2.0],
    "r": [1.0, 5.0],
    "th": [0.3, 2.8],
    "ph": [-3.0, 3.0]
  },
  "exclude": []
}
)json";

const char* kSchwarzschild = R"json({
  "name": "schwarzschild",
  "coordinates": ["t", "r", "th", "ph"],
  "parameters": {"M": 1.0},
  "tetrad": [
    ["sqrt(1 - 2*M/r)", "0", "0", "0"],
    ["0", "1/sqrt(1 - 2*M/r)", "0", "0"],
    ["0", "0", "r", "0"],
    ["0", "0", "0", "r*sin(th)"]
  ],
  "domain": {
    "t": [-2.0, 2.0],
    "r": [3.0, 8.0],
    "th": [0.3, 2.8],
    "ph": [-3.0, 3.0]
  },
  "exclude": ["2*M + 0.5 - r"]
}
)json";

const char* kFlrw = R"json({
  "name": "flrw",
  "coordinates": ["t", "x", "y", "z"],
  "parameters": {},
  "tetrad": [
    ["1", "0", "0", "0"],
    ["0", "t", "0", "0"],
    ["0", "0", "t", "0"],
    ["0", "0", "0", "t"]
  ],
  "domain": {
    "t": [1.0, 3.0],
    "x": [-2.0, 2.0],
    "y": [-2.0, 2.0],
    "z": [-2.0, 2.0]
  },
  "exclude": []
}
)json";

const char* kRindler = R"json({
  "name": "rindler",
  "coordinates": ["t", "x", "y", "z"],
  "parameters": {"a": 1.0},
  "tetrad": [
    ["1 + a*x", "0", "0", "0"],
    ["0", "1", "0", "0"],
    ["0", "0", "1", "0"],
    ["0", "0", "0", "1"]
  ],
  "domain": {
    "t": [-2.0, 2.0],
    "x": [-0.5, 2.0],
    "y": [-2.0, 2.0],
    "z": [-2.0, 2.0]
  },
  "exclude": ["0.1 - (1 + a*x)"]
}
)json";

const char* kDeSitterStatic = R"json({
  "name": "de-sitter-static",
  "coordinates": ["t", "r", "th", "ph"],
  "parameters": {"L": 3.0},
  "tetrad": [
    ["sqrt(1 - (r/L)^2)", "0", "0", "0"],
    ["0", "1/sqrt(1 - (r/L)^2)", "0", "0"],
    ["0", "0", "r", "0"],
    ["0", "0", "0", "r*sin(th)"]
  ],
  "domain": {
    "t": [-2.0, 2.0],
    "r": [0.5, 2.0],
    "th": [0.3, 2.8],
    "ph": [-3.0, 3.0]
  },
  "exclude": ["r/L - 0.9"]
}
)json";

}  // namespace

const std::vector<std::pair<std::string, const char*>>& builtinGeometryJson() {
  static const std::vector<std::pair<std::string, const char*>> v = {
      {"minkowski", kMinkowski},
      {"minkowski-spherical", kMinkowskiSpherical},
      {"schwarzschild", kSchwarzschild},
      {"flrw", kFlrw},
      {"rindler", kRindler},
      {"de-sitter-static", kDeSitterStatic},
  };
  return v;
}

}  // namespace tforge
