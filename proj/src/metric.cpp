#include "tforge/metric.hpp"

#include <cmath>
#include <cstddef>

namespace tforge {
namespace {

constexpr double kSymTol = 1e-14;
constexpr double kInvTol = 1e-12;
constexpr double kContextTol = 1e-12;

// Value plus four partials; arithmetic propagates the product rule so the
// blade-product recursion below yields derivative tables for free.
struct Jet {
  double v = 0.0;
  Eigen::Vector4d d = Eigen::Vector4d::Zero();

  Jet() = default;
  explicit Jet(double value) : v(value) {}
  Jet(double value, const Eigen::Vector4d& grad) : v(value), d(grad) {}

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d}; }
  friend Jet operator*(const Jet& a, const Jet& b) { return {a.v * b.v, a.v * b.d + b.v * a.d}; }
  friend Jet operator*(double s, const Jet& b) { return {s * b.v, s * b.d}; }
  bool zero() const { return v == 0.0 && d.isZero(0.0); }
};

struct PlainScalar {
  double v = 0.0;
  PlainScalar() = default;
  explicit PlainScalar(double value) : v(value) {}
  PlainScalar& operator+=(const PlainScalar& o) {
    v += o.v;
    return *this;
  }
  friend PlainScalar operator+(PlainScalar a, const PlainScalar& b) { return a += b; }
  friend PlainScalar operator-(const PlainScalar& a, const PlainScalar& b) { return PlainScalar{a.v - b.v}; }
  friend PlainScalar operator*(const PlainScalar& a, const PlainScalar& b) { return PlainScalar{a.v * b.v}; }
  friend PlainScalar operator*(double s, const PlainScalar& b) { return PlainScalar{s * b.v}; }
  bool zero() const { return v == 0.0; }
};

template <typename T>
using Row = std::array<T, kBlades>;

// Left Clifford multiplication by dx^mu of a coefficient row:
// dx^mu * v = dx^mu ^ v + g^{mu nu} iota_nu v.
template <typename T>
Row<T> dxMul(int mu, const Row<T>& in, const std::array<std::array<T, 4>, 4>& gInv) {
  Row<T> out{};
  for (unsigned b = 0; b < kBlades; ++b) {
    if (in[b].zero()) continue;
    const SignedBlade w = bladeWedge(1u << mu, b);
    if (w.sign != 0) out[w.blade] += static_cast<double>(w.sign) * in[b];
    for (int nu = 0; nu < 4; ++nu) {
      if (gInv[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)].zero()) continue;
      const SignedBlade c = bladeContract(nu, b);
      if (c.sign == 0) continue;
      out[c.blade] += static_cast<double>(c.sign) * (gInv[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] * in[b]);
    }
  }
  return out;
}

// All products blade_i * blade_j by grade recursion:
// blade_i = dx^mu ^ rest (mu = lowest index present) gives
// blade_i * v = dx^mu * (rest * v) - g^{mu nu} (iota_nu rest) * v.
template <typename T>
std::array<Row<T>, kBlades * kBlades> buildProducts(const std::array<std::array<T, 4>, 4>& gInv) {
  std::array<Row<T>, kBlades * kBlades> p{};
  // sort blade indices by grade so "rest" rows are ready when needed
  std::array<unsigned, kBlades> order{};
  {
    unsigned n = 0;
    for (int k = 0; k <= 4; ++k)
      for (unsigned b = 0; b < kBlades; ++b)
        if (bladeGrade(b) == k) order[n++] = b;
  }
  for (unsigned oi = 0; oi < kBlades; ++oi) {
    const unsigned i = order[oi];
    if (i == 0) {
      for (unsigned j = 0; j < kBlades; ++j) p[j][j] = T(1.0);
      continue;
    }
    const int mu = std::countr_zero(i);
    const unsigned rest = i & (i - 1u);
    for (unsigned j = 0; j < kBlades; ++j) {
      Row<T> acc = dxMul<T>(mu, p[rest * kBlades + j], gInv);
      for (int nu = 0; nu < 4; ++nu) {
        if (gInv[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)].zero()) continue;
        const SignedBlade c = bladeContract(nu, rest);
        if (c.sign == 0) continue;
        const Row<T>& sub = p[c.blade * kBlades + j];
        for (unsigned b = 0; b < kBlades; ++b) {
          if (sub[b].zero()) continue;
          acc[b] += static_cast<double>(-c.sign) * (gInv[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] * sub[b]);
        }
      }
      p[i * kBlades + j] = acc;
    }
  }
  return p;
}

}  // namespace

MetricContext::MetricContext(const Eigen::Matrix4d& g) : g_(g) {
  gInv_ = g_.inverse();
  det_ = g_.determinant();
  validate();
  buildTables(nullptr);
}

MetricContext::MetricContext(const Eigen::Matrix4d& g, const std::array<Eigen::Matrix4d, 4>& dg) : g_(g) {
  gInv_ = g_.inverse();
  det_ = g_.determinant();
  validate();
  for (int rho = 0; rho < 4; ++rho) {
    const auto r = static_cast<std::size_t>(rho);
    if ((dg[r] - dg[r].transpose()).cwiseAbs().maxCoeff() > kSymTol)
      throw GeometryError("metric derivative is not symmetric");
    dg_[r] = dg[r];
    dgInv_[r] = -gInv_ * dg_[r] * gInv_;
  }
  hasD_ = true;
  buildTables(&dg);
}

void MetricContext::validate() const {
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    throw GeometryError("metric is not symmetric");
  if (!(det_ < 0.0)) throw GeometryError("metric determinant must be negative");
  if (!(g_(0, 0) > 0.0)) throw GeometryError("metric requires g_00 > 0");
  if ((g_ * gInv_ - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > kInvTol)
    throw GeometryError("metric inverse residual too large; metric is near-degenerate");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g_);
  int pos = 0, neg = 0;
  for (int k = 0; k < 4; ++k) {
    if (es.eigenvalues()(k) > 0.0)
      ++pos;
    else if (es.eigenvalues()(k) < 0.0)
      ++neg;
  }
  if (pos != 1 || neg != 3) throw GeometryError("metric signature must be (+,-,-,-)");
}

void MetricContext::buildTables(const std::array<Eigen::Matrix4d, 4>* dg) {
  tab_.assign(kBlades * kBlades, {});
  if (dg == nullptr) {
    std::array<std::array<PlainScalar, 4>, 4> gi{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) gi[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = PlainScalar(gInv_(a, b));
    const auto p = buildProducts<PlainScalar>(gi);
    for (unsigned ij = 0; ij < kBlades * kBlades; ++ij)
      for (unsigned b = 0; b < kBlades; ++b)
        if (p[ij][b].v != 0.0) tab_[ij].push_back({b, p[ij][b].v});
    return;
  }
  std::array<std::array<Jet, 4>, 4> gi{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Eigen::Vector4d grad;
      for (int rho = 0; rho < 4; ++rho) grad(rho) = dgInv_[static_cast<std::size_t>(rho)](a, b);
      gi[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = Jet(gInv_(a, b), grad);
    }
  const auto p = buildProducts<Jet>(gi);
  dTab_.assign(4 * kBlades * kBlades, {});
  for (unsigned ij = 0; ij < kBlades * kBlades; ++ij)
    for (unsigned b = 0; b < kBlades; ++b) {
      const Jet& e = p[ij][b];
      if (e.v != 0.0) tab_[ij].push_back({b, e.v});
      for (unsigned rho = 0; rho < 4; ++rho)
        if (e.d(static_cast<int>(rho)) != 0.0) dTab_[rho * kBlades * kBlades + ij].push_back({b, e.d(static_cast<int>(rho))});
    }
}

const TermList& MetricContext::dProd(int rho, unsigned i, unsigned j) const {
  if (!hasD_) throw AlgebraError("metric context has no derivative tables");
  return dTab_[static_cast<unsigned>(rho) * kBlades * kBlades + i * kBlades + j];
}

bool compatibleContexts(const ContextPtr& a, const ContextPtr& b) {
  if (a == b) return a != nullptr;
  if (!a || !b) return false;
  return (a->g() - b->g()).cwiseAbs().maxCoeff() <= kContextTol;
}

ContextPtr minkowskiContext() {
  static const ContextPtr ctx = std::make_shared<MetricContext>(
      Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal().toDenseMatrix());
  return ctx;
}

}  // namespace tforge
