#pragma once

#include <Eigen/Dense>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "tforge/expression.hpp"
#include "tforge/metric.hpp"

namespace tforge {

using Ten2 = std::array<std::array<double, 4>, 4>;
using Ten3 = std::array<Ten2, 4>;
using Ten4 = std::array<Ten3, 4>;
using Ten5 = std::array<Ten4, 4>;

// A spacetime given by sixteen covector-field components e[mu][a](x),
// a domain box, and optional excluded regions (excluded where expr > 0).
struct GeometryDefinition {
  std::string name;
  SymbolTable symbols;
  std::array<std::array<Expression, 4>, 4> e;  // e[mu][a]
  Params defaults;
  std::array<std::array<double, 2>, 4> domain;  // [lo, hi] per coordinate
  std::vector<Expression> exclude;
};

// Tetrad components and coordinate partials at one point.
// de[rho][mu][a] = partial_rho e[mu][a]; higher orders prepend more
// derivative indices. ddde is filled only for order 3.
struct TetradJet {
  std::array<double, 4> x{};
  int order = 2;  // 1, 2 or 3
  Ten2 e{};
  Ten3 de{};
  Ten4 dde{};
  Ten5 ddde{};
};

// Everything metric-level at one point, assembled from a tetrad jet.
// Index conventions:
//   gamma[mu][nu][lam]            Gamma_{mu nu}^lam
//   dGamma[rho][mu][nu][lam]      partial_rho of it
//   riem[lam][mu][nu][kap]        R_{lam mu nu}^kap
//     = dGamma[mu][nu][lam][kap] - dGamma[nu][mu][lam][kap]
//       + gamma[mu][eta][kap] gamma[nu][lam][eta] - (mu <-> nu)
//   ricci(nu,rho) = sum_c riem[nu][c][rho][c]
// Order-3 frames add one more derivative of Gamma, Riemann, Ricci, R.
struct PointFrame {
  std::array<double, 4> x{};
  int order = 2;
  Ten2 e{};
  Ten3 de{};
  Ten4 dde{};
  Ten5 ddde{};
  Eigen::Matrix4d g, gInv;
  Ten3 dg{};    // dg[rho][mu][nu]
  Ten4 ddg{};   // ddg[rho][sig][mu][nu]
  Ten3 gamma{};
  Ten4 dGamma{};
  Ten5 ddGamma{};
  Ten4 riem{};
  Ten5 dRiem{};  // dRiem[rho][lam][mu][nu][kap], order 3 only
  Eigen::Matrix4d ricci;
  Ten3 dRicci{};  // dRicci[rho][nu][sig], order 3 only
  double R = 0.0;
  Eigen::Vector4d dR;  // order 3 only
  double sqrtNegDet = 0.0;
  Eigen::Vector4d dSqrtNegDet;
  ContextPtr ctx;  // carries derivative tables
};

// Binds parameter values and caches symbolic derivatives of the tetrad
// components up to order 3. Construction fails on unknown parameter names.
class GeometryInstance {
 public:
  explicit GeometryInstance(GeometryDefinition def, const Params& overrides = {});

  const GeometryDefinition& definition() const { return def_; }
  const Params& params() const { return params_; }

  bool inDomainBox(const std::array<double, 4>& x) const;
  bool excluded(const std::array<double, 4>& x) const;

  // symbolic partial evaluation; no domain check
  TetradJet evalJet(const std::array<double, 4>& x, int order) const;

 private:
  GeometryDefinition def_;
  Params params_;
  std::array<std::array<Expression, 4>, 4> be_;        // bound
  Expression d1_[4][4][4];                             // [rho][mu][a]
  Expression d2_[4][4][4][4];                          // [rho][sig][mu][a]
  Expression d3_[4][4][4][4][4];                       // [rho][sig][tau][mu][a]
  std::vector<Expression> bexclude_;
};

// Single assembly path for every jet source (symbolic, finite-difference,
// perturbed). Throws on singular tetrad or bad metric signature.
PointFrame frameFromJet(const TetradJet& jet);

// Domain-checked frame construction at a point.
PointFrame buildFrame(const GeometryInstance& geo, const std::array<double, 4>& x, int order = 2);

// Central-difference tetrad partials; values from expression evaluation,
// derivatives purely numeric. Step sizes 1e-4*(1+|x_k|) at order 1 and
// 1e-3*(1+|x_k|) for the second-derivative stencils. Near a domain edge the
// step shrinks up to 4 times, then the call fails.
TetradJet finiteDifferenceOracle(const GeometryInstance& geo, const std::array<double, 4>& x, int order);

// Coordinate tensor with value and optional first/second partials, flat
// row-major over slots (upper slots first, then lower). dv prepends the
// derivative index: dv[rho * size + i] = partial_rho v[i].
struct CoordTensorJet {
  int p = 0, q = 0;
  std::vector<double> v;
  std::vector<double> dv;
  std::vector<double> ddv;

  std::size_t size() const { return v.size(); }
  static std::size_t pow4(int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= 4;
    return r;
  }
};

// Levi-Civita covariant derivative: (p,q) -> (p,q+1) with the new lower
// slot inserted ahead of the existing lower slots. Result carries first
// partials when the input supplied second partials.
CoordTensorJet covariantDerivative(const CoordTensorJet& t, const PointFrame& f);

Eigen::Matrix4d einsteinTensor(const PointFrame& f);

// fully lowered curvature, standard slot order: out[k][l][m][n] = R_{klmn}
// with pair symmetry R_{klmn} = R_{mnkl}
Ten4 loweredRiemann(const PointFrame& f);

double kretschmannScalar(const PointFrame& f);

// uniform in the domain box, rejecting excluded regions
std::array<double, 4> samplePoint(const GeometryInstance& geo, std::mt19937_64& rng);

}  // namespace tforge
