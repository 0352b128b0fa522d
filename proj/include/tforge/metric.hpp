#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "tforge/blades.hpp"
#include "tforge/errors.hpp"

namespace tforge {

struct ProductTerm {
  unsigned blade;
  double w;
};
using TermList = std::vector<ProductTerm>;

// Pointwise metric data plus the expansion of every basis-blade Clifford
// product in that metric. All multivector arithmetic at a point goes through
// one of these. Construction validates: symmetry, invertibility, det g < 0,
// g_00 > 0, signature (+,-,-,-).
class MetricContext {
 public:
  explicit MetricContext(const Eigen::Matrix4d& g);
  // dg[rho] = partial_rho g; enables the derivative tables used by
  // product-rule differentiation of pointwise products.
  MetricContext(const Eigen::Matrix4d& g, const std::array<Eigen::Matrix4d, 4>& dg);

  const Eigen::Matrix4d& g() const { return g_; }
  const Eigen::Matrix4d& gInv() const { return gInv_; }
  double detG() const { return det_; }

  bool hasDerivatives() const { return hasD_; }
  const Eigen::Matrix4d& dg(int rho) const { return dg_[static_cast<std::size_t>(rho)]; }
  const Eigen::Matrix4d& dgInv(int rho) const { return dgInv_[static_cast<std::size_t>(rho)]; }

  // blade_i * blade_j expanded over basis blades
  const TermList& prod(unsigned i, unsigned j) const { return tab_[i * 16u + j]; }
  // partial_rho of the same structure coefficients
  const TermList& dProd(int rho, unsigned i, unsigned j) const;

 private:
  void validate() const;
  void buildTables(const std::array<Eigen::Matrix4d, 4>* dg);

  Eigen::Matrix4d g_, gInv_;
  double det_ = 0.0;
  bool hasD_ = false;
  std::array<Eigen::Matrix4d, 4> dg_, dgInv_;
  std::vector<TermList> tab_;
  std::vector<TermList> dTab_;
};

using ContextPtr = std::shared_ptr<const MetricContext>;

// Same context object, or structurally identical metrics. Pointwise binary
// operations require this.
bool compatibleContexts(const ContextPtr& a, const ContextPtr& b);

// Shared context for the constant Minkowski metric diag(1,-1,-1,-1).
ContextPtr minkowskiContext();

}  // namespace tforge
