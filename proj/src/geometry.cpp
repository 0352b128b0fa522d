#include "tforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tforge {
namespace {

constexpr double kEta[4] = {1.0, -1.0, -1.0, -1.0};

}  // namespace

GeometryInstance::GeometryInstance(GeometryDefinition def, const Params& overrides)
    : def_(std::move(def)), params_(def_.defaults) {
  for (const auto& [k, v] : overrides) {
    if (!def_.symbols.isParameter(k)) throw GeometryError("unknown parameter '" + k + "'");
    params_[k] = v;
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a) be_[mu][a] = def_.e[mu][a].bind(params_);
  for (int r = 0; r < 4; ++r)
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 4; ++a) d1_[r][mu][a] = be_[mu][a].derivative(r);
  for (int r = 0; r < 4; ++r)
    for (int s = r; s < 4; ++s)
      for (int mu = 0; mu < 4; ++mu)
        for (int a = 0; a < 4; ++a) {
          d2_[r][s][mu][a] = d1_[r][mu][a].derivative(s);
          d2_[s][r][mu][a] = d2_[r][s][mu][a];
        }
  for (int r = 0; r < 4; ++r)
    for (int s = r; s < 4; ++s)
      for (int t = s; t < 4; ++t)
        for (int mu = 0; mu < 4; ++mu)
          for (int a = 0; a < 4; ++a) {
            // mixed partials commute, fill all slot orders with one tree
            Expression d = d2_[r][s][mu][a].derivative(t);
            d3_[r][s][t][mu][a] = d;
            d3_[r][t][s][mu][a] = d;
            d3_[s][r][t][mu][a] = d;
            d3_[s][t][r][mu][a] = d;
            d3_[t][r][s][mu][a] = d;
            d3_[t][s][r][mu][a] = d;
          }
  bexclude_.reserve(def_.exclude.size());
  for (const Expression& ex : def_.exclude) bexclude_.push_back(ex.bind(params_));
}

bool GeometryInstance::inDomainBox(const std::array<double, 4>& x) const {
  for (int k = 0; k < 4; ++k)
    if (x[k] < def_.domain[k][0] || x[k] > def_.domain[k][1]) return false;
  return true;
}

bool GeometryInstance::excluded(const std::array<double, 4>& x) const {
  for (const Expression& ex : bexclude_)
    if (ex.evaluate(x) > 0.0) return true;
  return false;
}

TetradJet GeometryInstance::evalJet(const std::array<double, 4>& x, int order) const {
  if (order < 1 || order > 3) throw GeometryError("jet order must be 1, 2 or 3");
  TetradJet j;
  j.x = x;
  j.order = order;
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a) j.e[mu][a] = be_[mu][a].evaluate(x);
  for (int r = 0; r < 4; ++r)
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 4; ++a) j.de[r][mu][a] = d1_[r][mu][a].evaluate(x);
  if (order >= 2)
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s)
        for (int mu = 0; mu < 4; ++mu)
          for (int a = 0; a < 4; ++a) j.dde[r][s][mu][a] = d2_[r][s][mu][a].evaluate(x);
  if (order >= 3)
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t)
          for (int mu = 0; mu < 4; ++mu)
            for (int a = 0; a < 4; ++a) j.ddde[r][s][t][mu][a] = d3_[r][s][t][mu][a].evaluate(x);
  return j;
}

PointFrame frameFromJet(const TetradJet& jet) {
  PointFrame f;
  f.x = jet.x;
  f.order = jet.order;
  f.e = jet.e;
  f.de = jet.de;
  f.dde = jet.dde;
  f.ddde = jet.ddde;

  Eigen::Matrix4d em;
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a) em(mu, a) = jet.e[mu][a];
  if (std::abs(em.determinant()) < 1e-12)
    throw GeometryError("tetrad matrix is singular at the requested point");

  // g_{mu nu} = e_mu^a e_nu^b eta_ab, plus coordinate derivatives by the
  // product rule on the tetrad jet
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      double s = 0;
      for (int a = 0; a < 4; ++a) s += kEta[a] * jet.e[mu][a] * jet.e[nu][a];
      f.g(mu, nu) = s;
    }
  for (int r = 0; r < 4; ++r)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        double s = 0;
        for (int a = 0; a < 4; ++a)
          s += kEta[a] * (jet.de[r][mu][a] * jet.e[nu][a] + jet.e[mu][a] * jet.de[r][nu][a]);
        f.dg[r][mu][nu] = s;
      }
  if (jet.order >= 2)
    for (int r = 0; r < 4; ++r)
      for (int u = 0; u < 4; ++u)
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu) {
            double s = 0;
            for (int a = 0; a < 4; ++a)
              s += kEta[a] * (jet.dde[r][u][mu][a] * jet.e[nu][a] + jet.de[r][mu][a] * jet.de[u][nu][a] +
                              jet.de[u][mu][a] * jet.de[r][nu][a] + jet.e[mu][a] * jet.dde[r][u][nu][a]);
            f.ddg[r][u][mu][nu] = s;
          }

  Ten5 dddg{};
  if (jet.order >= 3)
    for (int r = 0; r < 4; ++r)
      for (int u = 0; u < 4; ++u)
        for (int t = 0; t < 4; ++t)
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
              double s = 0;
              for (int a = 0; a < 4; ++a)
                s += kEta[a] * (jet.ddde[r][u][t][mu][a] * jet.e[nu][a] +
                                jet.dde[r][u][mu][a] * jet.de[t][nu][a] +
                                jet.dde[r][t][mu][a] * jet.de[u][nu][a] +
                                jet.dde[u][t][mu][a] * jet.de[r][nu][a] +
                                jet.de[r][mu][a] * jet.dde[u][t][nu][a] +
                                jet.de[u][mu][a] * jet.dde[r][t][nu][a] +
                                jet.de[t][mu][a] * jet.dde[r][u][nu][a] +
                                jet.e[mu][a] * jet.ddde[r][u][t][nu][a]);
              dddg[r][u][t][mu][nu] = s;
            }

  std::array<Eigen::Matrix4d, 4> dgm;
  for (int r = 0; r < 4; ++r)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) dgm[r](mu, nu) = f.dg[r][mu][nu];
  f.ctx = std::make_shared<MetricContext>(f.g, dgm);  // validates the metric
  f.gInv = f.ctx->gInv();

  std::array<Eigen::Matrix4d, 4> dgInv;
  for (int r = 0; r < 4; ++r) dgInv[r] = f.ctx->dgInv(r);

  std::array<std::array<Eigen::Matrix4d, 4>, 4> ddgInv{};
  if (jet.order >= 2)
    for (int r = 0; r < 4; ++r)
      for (int u = 0; u < 4; ++u) {
        Eigen::Matrix4d dd;
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu) dd(mu, nu) = f.ddg[r][u][mu][nu];
        ddgInv[r][u] = -f.gInv * dd * f.gInv - dgInv[r] * dgm[u] * f.gInv - f.gInv * dgm[u] * dgInv[r];
      }

  // Gamma_{mu nu}^lam = 1/2 g^{lam kap}(d_mu g_{nu kap} + d_nu g_{mu kap} - d_kap g_{mu nu})
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int lam = 0; lam < 4; ++lam) {
        double s = 0;
        for (int kap = 0; kap < 4; ++kap)
          s += f.gInv(lam, kap) * (f.dg[mu][nu][kap] + f.dg[nu][mu][kap] - f.dg[kap][mu][nu]);
        f.gamma[mu][nu][lam] = 0.5 * s;
      }
  if (jet.order >= 2)
    for (int r = 0; r < 4; ++r)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          for (int lam = 0; lam < 4; ++lam) {
            double s = 0;
            for (int kap = 0; kap < 4; ++kap) {
              s += dgInv[r](lam, kap) * (f.dg[mu][nu][kap] + f.dg[nu][mu][kap] - f.dg[kap][mu][nu]);
              s += f.gInv(lam, kap) * (f.ddg[r][mu][nu][kap] + f.ddg[r][nu][mu][kap] - f.ddg[r][kap][mu][nu]);
            }
            f.dGamma[r][mu][nu][lam] = 0.5 * s;
          }
  if (jet.order >= 3)
    for (int r = 0; r < 4; ++r)
      for (int u = 0; u < 4; ++u)
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            for (int lam = 0; lam < 4; ++lam) {
              double s = 0;
              for (int kap = 0; kap < 4; ++kap) {
                s += ddgInv[r][u](lam, kap) * (f.dg[mu][nu][kap] + f.dg[nu][mu][kap] - f.dg[kap][mu][nu]);
                s += dgInv[r](lam, kap) * (f.ddg[u][mu][nu][kap] + f.ddg[u][nu][mu][kap] - f.ddg[u][kap][mu][nu]);
                s += dgInv[u](lam, kap) * (f.ddg[r][mu][nu][kap] + f.ddg[r][nu][mu][kap] - f.ddg[r][kap][mu][nu]);
                s += f.gInv(lam, kap) * (dddg[r][u][mu][nu][kap] + dddg[r][u][nu][mu][kap] - dddg[r][u][kap][mu][nu]);
              }
              f.ddGamma[r][u][mu][nu][lam] = 0.5 * s;
            }

  if (jet.order >= 2) {
    for (int lam = 0; lam < 4; ++lam)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          for (int kap = 0; kap < 4; ++kap) {
            double s = f.dGamma[mu][nu][lam][kap] - f.dGamma[nu][mu][lam][kap];
            for (int eta = 0; eta < 4; ++eta)
              s += f.gamma[mu][eta][kap] * f.gamma[nu][lam][eta] - f.gamma[nu][eta][kap] * f.gamma[mu][lam][eta];
            f.riem[lam][mu][nu][kap] = s;
          }
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho) {
        double s = 0;
        for (int c = 0; c < 4; ++c) s += f.riem[nu][c][rho][c];
        f.ricci(nu, rho) = s;
      }
    f.R = 0;
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho) f.R += f.gInv(nu, rho) * f.ricci(nu, rho);
  }

  if (jet.order >= 3) {
    for (int r = 0; r < 4; ++r)
      for (int lam = 0; lam < 4; ++lam)
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            for (int kap = 0; kap < 4; ++kap) {
              double s = f.ddGamma[r][mu][nu][lam][kap] - f.ddGamma[r][nu][mu][lam][kap];
              for (int eta = 0; eta < 4; ++eta) {
                s += f.dGamma[r][mu][eta][kap] * f.gamma[nu][lam][eta] + f.gamma[mu][eta][kap] * f.dGamma[r][nu][lam][eta];
                s -= f.dGamma[r][nu][eta][kap] * f.gamma[mu][lam][eta] + f.gamma[nu][eta][kap] * f.dGamma[r][mu][lam][eta];
              }
              f.dRiem[r][lam][mu][nu][kap] = s;
            }
    for (int r = 0; r < 4; ++r)
      for (int nu = 0; nu < 4; ++nu)
        for (int rho = 0; rho < 4; ++rho) {
          double s = 0;
          for (int c = 0; c < 4; ++c) s += f.dRiem[r][nu][c][rho][c];
          f.dRicci[r][nu][rho] = s;
        }
    for (int r = 0; r < 4; ++r) {
      double s = 0;
      for (int nu = 0; nu < 4; ++nu)
        for (int rho = 0; rho < 4; ++rho)
          s += dgInv[r](nu, rho) * f.ricci(nu, rho) + f.gInv(nu, rho) * f.dRicci[r][nu][rho];
      f.dR(r) = s;
    }
  }

  f.sqrtNegDet = std::sqrt(-f.ctx->detG());
  for (int r = 0; r < 4; ++r) {
    double tr = 0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) tr += f.gInv(mu, nu) * f.dg[r][nu][mu];
    f.dSqrtNegDet(r) = 0.5 * f.sqrtNegDet * tr;
  }

  return f;
}

PointFrame buildFrame(const GeometryInstance& geo, const std::array<double, 4>& x, int order) {
  if (!geo.inDomainBox(x)) throw GeometryError("point outside the domain box");
  if (geo.excluded(x)) throw GeometryError("point lies in an excluded region");
  return frameFromJet(geo.evalJet(x, order));
}

TetradJet finiteDifferenceOracle(const GeometryInstance& geo, const std::array<double, 4>& x, int order) {
  if (order < 1 || order > 2) throw GeometryError("finite-difference order must be 1 or 2");
  TetradJet j;
  j.x = x;
  j.order = order;

  auto evalAt = [&](const std::array<double, 4>& p, Ten2& out) {
    TetradJet tmp = geo.evalJet(p, 1);
    out = tmp.e;
  };
  evalAt(x, j.e);

  auto usable = [&](const std::array<double, 4>& p) { return geo.inDomainBox(p) && !geo.excluded(p); };

  // per-coordinate step, shrunk while the stencil pokes outside
  auto pickStep = [&](int k, double base) {
    double h = base * (1.0 + std::abs(x[k]));
    for (int attempt = 0; attempt <= 4; ++attempt) {
      std::array<double, 4> xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      if (usable(xp) && usable(xm)) return h;
      h *= 0.5;
    }
    throw GeometryError("finite-difference stencil does not fit inside the domain");
  };

  {
    std::array<double, 4> h1;
    for (int k = 0; k < 4; ++k) h1[k] = pickStep(k, 1e-4);
    for (int r = 0; r < 4; ++r) {
      std::array<double, 4> xp = x, xm = x;
      xp[r] += h1[r];
      xm[r] -= h1[r];
      Ten2 ep, em2;
      evalAt(xp, ep);
      evalAt(xm, em2);
      for (int mu = 0; mu < 4; ++mu)
        for (int a = 0; a < 4; ++a) j.de[r][mu][a] = (ep[mu][a] - em2[mu][a]) / (2 * h1[r]);
    }
  }

  if (order == 2) {
    std::array<double, 4> h2;
    for (int k = 0; k < 4; ++k) h2[k] = pickStep(k, 1e-3);
    // the cross stencil needs both corners; shrink the pair together
    for (int r = 0; r < 4; ++r)
      for (int u = r; u < 4; ++u) {
        if (r == u) {
          std::array<double, 4> xp = x, xm = x;
          xp[r] += h2[r];
          xm[r] -= h2[r];
          Ten2 ep, em2;
          evalAt(xp, ep);
          evalAt(xm, em2);
          for (int mu = 0; mu < 4; ++mu)
            for (int a = 0; a < 4; ++a)
              j.dde[r][r][mu][a] = (ep[mu][a] - 2 * j.e[mu][a] + em2[mu][a]) / (h2[r] * h2[r]);
          continue;
        }
        double hr = h2[r], hu = h2[u];
        bool ok = false;
        for (int attempt = 0; attempt <= 4 && !ok; ++attempt) {
          std::array<double, 4> c1 = x, c2 = x, c3 = x, c4 = x;
          c1[r] += hr; c1[u] += hu;
          c2[r] += hr; c2[u] -= hu;
          c3[r] -= hr; c3[u] += hu;
          c4[r] -= hr; c4[u] -= hu;
          if (usable(c1) && usable(c2) && usable(c3) && usable(c4)) {
            Ten2 e1, e2, e3, e4;
            evalAt(c1, e1);
            evalAt(c2, e2);
            evalAt(c3, e3);
            evalAt(c4, e4);
            for (int mu = 0; mu < 4; ++mu)
              for (int a = 0; a < 4; ++a) {
                const double v = (e1[mu][a] - e2[mu][a] - e3[mu][a] + e4[mu][a]) / (4 * hr * hu);
                j.dde[r][u][mu][a] = v;
                j.dde[u][r][mu][a] = v;
              }
            ok = true;
          } else {
            hr *= 0.5;
            hu *= 0.5;
          }
        }
        if (!ok) throw GeometryError("finite-difference stencil does not fit inside the domain");
      }
  }
  return j;
}

CoordTensorJet covariantDerivative(const CoordTensorJet& t, const PointFrame& f) {
  const int n = t.p + t.q;
  const std::size_t sz = CoordTensorJet::pow4(n);
  if (t.v.size() != sz) throw GeometryError("tensor value size does not match its rank");
  if (t.dv.size() != 4 * sz) throw GeometryError("tensor first partials missing");
  const bool wantDv = !t.ddv.empty();
  if (wantDv && t.ddv.size() != 16 * sz) throw GeometryError("tensor second partials have wrong size");

  CoordTensorJet out;
  out.p = t.p;
  out.q = t.q + 1;
  const std::size_t osz = 4 * sz;
  out.v.assign(osz, 0.0);
  if (wantDv) out.dv.assign(4 * osz, 0.0);

  // decode flat index into slots, slot 0 = leftmost (most significant)
  auto slotOf = [&](std::size_t idx, int slot) { return static_cast<int>((idx >> (2 * (n - 1 - slot))) & 3u); };
  auto withSlot = [&](std::size_t idx, int slot, int val) {
    const int shift = 2 * (n - 1 - slot);
    return (idx & ~(std::size_t(3) << shift)) | (std::size_t(val) << shift);
  };

  for (std::size_t idx = 0; idx < sz; ++idx) {
    for (int mu = 0; mu < 4; ++mu) {
      // output flat index: uppers, then mu, then original lowers
      std::size_t oidx = 0;
      for (int s = 0; s < t.p; ++s) oidx = oidx * 4 + static_cast<std::size_t>(slotOf(idx, s));
      oidx = oidx * 4 + static_cast<std::size_t>(mu);
      for (int s = t.p; s < n; ++s) oidx = oidx * 4 + static_cast<std::size_t>(slotOf(idx, s));

      double acc = t.dv[static_cast<std::size_t>(mu) * sz + idx];
      if (wantDv)
        for (int r = 0; r < 4; ++r)
          out.dv[static_cast<std::size_t>(r) * osz + oidx] =
              t.ddv[(static_cast<std::size_t>(r) * 4 + static_cast<std::size_t>(mu)) * sz + idx];

      for (int s = 0; s < n; ++s) {
        const int is = slotOf(idx, s);
        const bool upper = s < t.p;
        for (int lam = 0; lam < 4; ++lam) {
          const std::size_t kdx = withSlot(idx, s, lam);
          const double w = upper ? f.gamma[lam][mu][is] : -f.gamma[is][mu][lam];
          acc += w * t.v[kdx];
          if (wantDv)
            for (int r = 0; r < 4; ++r) {
              const double dw = upper ? f.dGamma[r][lam][mu][is] : -f.dGamma[r][is][mu][lam];
              out.dv[static_cast<std::size_t>(r) * osz + oidx] +=
                  dw * t.v[kdx] + w * t.dv[static_cast<std::size_t>(r) * sz + kdx];
            }
        }
      }
      out.v[oidx] = acc;
    }
  }
  return out;
}

Eigen::Matrix4d einsteinTensor(const PointFrame& f) {
  const Eigen::Matrix4d ricciUp = f.gInv * f.ricci * f.gInv;
  return ricciUp - 0.5 * f.R * f.gInv;
}

Ten4 loweredRiemann(const PointFrame& f) {
  Ten4 low{};
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m)
        for (int nn = 0; nn < 4; ++nn) {
          double s = 0;
          for (int sig = 0; sig < 4; ++sig) s += f.g(k, sig) * f.riem[l][m][nn][sig];
          low[k][l][m][nn] = s;
        }
  return low;
}

double kretschmannScalar(const PointFrame& f) {
  const Ten4 low = loweredRiemann(f);
  Ten4 up{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = 0;
          for (int a2 = 0; a2 < 4; ++a2)
            for (int b2 = 0; b2 < 4; ++b2)
              for (int c2 = 0; c2 < 4; ++c2)
                for (int d2 = 0; d2 < 4; ++d2)
                  s += f.gInv(a, a2) * f.gInv(b, b2) * f.gInv(c, c2) * f.gInv(d, d2) * low[a2][b2][c2][d2];
          up[a][b][c][d] = s;
        }
  double k = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) k += low[a][b][c][d] * up[a][b][c][d];
  return k;
}

std::array<double, 4> samplePoint(const GeometryInstance& geo, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::array<double, 4> x;
    for (int k = 0; k < 4; ++k) {
      const auto& box = geo.definition().domain[k];
      x[k] = box[0] + (box[1] - box[0]) * u(rng);
    }
    if (!geo.excluded(x)) return x;
  }
  throw GeometryError("could not sample a point outside the excluded regions");
}

}  // namespace tforge
