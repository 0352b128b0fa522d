#include "tforge/connection.hpp"

#include <cmath>

#include "tforge/errors.hpp"

namespace tforge {

namespace {

constexpr std::array<unsigned, 6> kGrade2Blades{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100};

// pair order 01, 02, 03, 12, 13, 23 shared by coefficient extraction
constexpr std::array<std::array<int, 2>, 6> kFramePairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

FrameJets frameJets(const TetradFrame& tf, int order) {
  if (!tf.componentJets)
    throw GeometryError("coframe carries no component derivatives; rotate its jets instead");
  int depth = order < 0 ? std::min(tf.frame.order, 2) : order;
  if (depth < 1 || depth > 2 || depth > tf.frame.order)
    throw GeometryError("frame order too low for the requested jet");
  FrameJets fj;
  fj.tf = tf;
  fj.order = depth;
  for (int a = 0; a < 4; ++a) fj.up[a] = coframeJet(tf.frame, a, depth);
  return fj;
}

FrameJets rotateFrameJets(const FrameJets& fj, const CovJet<double>& sJet) {
  FrameJets out;
  out.order = std::min(fj.order, sJet.order);
  const CovJet<double> sInv = jetReverse(sJet);

  TetradFrame rot;
  rot.frame = fj.tf.frame;
  rot.frame.de = {};
  rot.frame.dde = {};
  rot.frame.ddde = {};
  rot.componentJets = false;

  Eigen::Matrix4d comp;
  for (int a = 0; a < 4; ++a) {
    out.up[a] = jetMul(jetMul(sInv, fj.up[a]), sJet);
    rot.up[a] = out.up[a].v;
    rot.down[a] = rot.up[a] * kFrameEta[a];
    for (int mu = 0; mu < 4; ++mu) {
      comp(mu, a) = rot.up[a].coeff(1u << mu);
      rot.frame.e[mu][a] = comp(mu, a);
    }
  }
  if (std::abs(comp.determinant()) < 1e-12)
    throw GeometryError("rotated tetrad component matrix is singular");
  rot.inv = comp.inverse().transpose();
  out.tf = rot;
  return out;
}

BConnection bConnection(const FrameJets& fj) {
  const ContextPtr& ctx = fj.tf.frame.ctx;
  BConnection bc;
  bc.order = fj.order >= 2 ? 1 : 0;

  for (int mu = 0; mu < 4; ++mu) {
    Mv cliff(ctx), wedgeForm(ctx);
    for (int a = 0; a < 4; ++a) {
      const Mv upsDown = fj.up[a].ups[mu] * kFrameEta[a];
      cliff += fj.up[a].v * upsDown;
      wedgeForm += wedge(fj.up[a].v, upsDown);
    }
    bc.b[mu] = cliff * (-0.25);
    bc.wedgeCliffordGap = std::max(bc.wedgeCliffordGap, maxAbs(cliff - wedgeForm));
    for (unsigned blade = 0; blade < static_cast<unsigned>(kBlades); ++blade)
      if (bladeGrade(blade) != 2)
        bc.offGradeResidual = std::max(bc.offGradeResidual, std::abs(bc.b[mu].coeff(blade)));
  }

  if (bc.order >= 1)
    for (int nu = 0; nu < 4; ++nu)
      for (int mu = 0; mu < 4; ++mu) {
        Mv acc(ctx);
        for (int a = 0; a < 4; ++a) {
          acc += fj.up[a].ups[mu] * (fj.up[a].ups[nu] * kFrameEta[a]);
          acc += fj.up[a].v * (fj.up[a].upsUps[mu][nu] * kFrameEta[a]);
        }
        bc.ups[mu][nu] = acc * (-0.25);
      }

  // frame-bivector coefficients from the 6x6 change of basis
  Eigen::Matrix<double, 6, 6> basis;
  for (int p = 0; p < 6; ++p) {
    const Mv bivec = wedge(fj.tf.up[kFramePairs[p][0]], fj.tf.up[kFramePairs[p][1]]);
    for (int q = 0; q < 6; ++q) basis(q, p) = bivec.coeff(kGrade2Blades[q]);
  }
  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, 6>> qr(basis);
  for (int mu = 0; mu < 4; ++mu) {
    Eigen::Matrix<double, 6, 1> rhs;
    for (int q = 0; q < 6; ++q) rhs(q) = bc.b[mu].coeff(kGrade2Blades[q]);
    const Eigen::Matrix<double, 6, 1> sol = qr.solve(rhs);
    for (int p = 0; p < 6; ++p) {
      bc.coeff[mu][kFramePairs[p][0]][kFramePairs[p][1]] = sol(p);
      bc.coeff[mu][kFramePairs[p][1]][kFramePairs[p][0]] = -sol(p);
    }
  }
  return bc;
}

Ten3 spinConnectionOracle(const TetradFrame& tf) {
  const PointFrame& f = tf.frame;
  if (!tf.componentJets) throw GeometryError("oracle needs component derivatives");

  Eigen::Matrix4d comp, dComp[4];
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a) comp(mu, a) = f.e[mu][a];
  for (int rho = 0; rho < 4; ++rho)
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 4; ++a) dComp[rho](mu, a) = f.de[rho][mu][a];

  // einv(a, nu) = e^nu_a; partial derivative by the inverse-matrix rule
  const Eigen::Matrix4d einv = comp.inverse();
  Eigen::Matrix4d dEinv[4];
  for (int rho = 0; rho < 4; ++rho) dEinv[rho] = -einv * dComp[rho] * einv;

  Ten3 omega{};
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double acc = 0.0;
        for (int nu = 0; nu < 4; ++nu) {
          double cov = dEinv[mu](b, nu);
          for (int lam = 0; lam < 4; ++lam) cov += f.gamma[mu][lam][nu] * einv(b, lam);
          acc += comp(nu, a) * cov;
        }
        omega[mu][a][b] = kFrameEta[a] * acc;
      }
  return omega;
}

Mv curvatureTwoForm(const PointFrame& f, const BConnection& bc, int mu, int nu) {
  if (bc.order < 1) throw GeometryError("curvature needs connection derivatives");
  auto dB = [&](int m, int n) {
    Mv r = bc.ups[m][n];
    for (int lam = 0; lam < 4; ++lam) r -= bc.b[lam] * f.gamma[m][n][lam];
    r -= commutator(bc.b[m], bc.b[n]);
    return r;
  };
  return (dB(mu, nu) - dB(nu, mu) + commutator(bc.b[mu], bc.b[nu])) * 2.0;
}

Mv curvatureFromRiemann(const PointFrame& f, int mu, int nu) {
  const Ten4 low = loweredRiemann(f);
  Mv out(f.ctx);
  for (int alpha = 0; alpha < 4; ++alpha)
    for (int beta = alpha + 1; beta < 4; ++beta)
      out.setCoeff((1u << alpha) | (1u << beta), low[mu][nu][alpha][beta]);
  return out;
}

Mv bFromGenerators(const FrameJets& fj, int mu) {
  // jets of the generators via the jet algebra
  const CovJet<double>&e1 = fj.up[1], &e2 = fj.up[2], &e3 = fj.up[3];
  const CovJet<double>& hJ = fj.up[0];
  const CovJet<double> iJ = jetScale(jetMul(e1, e2), -1.0);
  const CovJet<double> kJ = jetScale(jetMul(e1, e3), -1.0);

  const Mv &h = hJ.v, &i = iJ.v, &k = kJ.v;
  const Mv &uh = hJ.ups[mu], &ui = iJ.ups[mu], &uk = kJ.ups[mu];

  Mv b = (h * uh) * (-3.0 / 8.0);
  b += (i * ui + k * uk) * 0.25;
  b += (h * (i * ui + k * uk) * h) * 0.125;
  b -= (i * k * h * uh * k * i) * 0.125;
  b -= (k * i * ui * k + i * k * uk * i) * 0.125;
  return b;
}

CovJet<double> spinElementJet(const GeometryInstance& geo, const SpinElement& se,
                              const TetradFrame& tf) {
  const PointFrame& f = tf.frame;
  bool constantWeights = true;
  for (const Expression& fac : se.factors) constantWeights = constantWeights && fac.isConstant();
  if (constantWeights) {
    FrameJets fj = frameJets(tf, 1);
    CovJet<double> beta;
    beta.order = 1;
    beta.v = Mv(f.ctx);
    for (auto& m : beta.ups) m = Mv(f.ctx);
    int pair = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b, ++pair) {
        double w = se.c[a][b];
        if (!se.factors.empty()) w *= se.factors[pair].evaluate(f.x);
        if (w != 0.0) beta = jetAdd(beta, jetScale(jetWedge(fj.up[a], fj.up[b]), w));
      }
    return jetExp(beta);
  }

  // central differences on the element's blade coefficients
  RawJet<double> raw;
  raw.order = 1;
  raw.v = spinElementAt(se, tf);
  for (int rho = 0; rho < 4; ++rho) {
    double h = 1e-4 * (1.0 + std::abs(f.x[rho]));
    std::array<double, 4> xp{}, xm{};
    bool ok = false;
    for (int shrink = 0; shrink <= 4 && !ok; ++shrink, h *= 0.5) {
      xp = f.x;
      xm = f.x;
      xp[rho] += h;
      xm[rho] -= h;
      ok = geo.inDomainBox(xp) && !geo.excluded(xp) && geo.inDomainBox(xm) && !geo.excluded(xm);
      if (ok) break;
    }
    if (!ok) throw GeometryError("finite-difference stencil does not fit inside the domain");
    const Mv sp = spinElementAt(se, tetradForms(buildFrame(geo, xp, 1)));
    const Mv sm = spinElementAt(se, tetradForms(buildFrame(geo, xm, 1)));
    Mv d(f.ctx);
    for (unsigned blade = 0; blade < static_cast<unsigned>(kBlades); ++blade)
      d.setCoeff(blade, (sp.coeff(blade) - sm.coeff(blade)) / (2.0 * h));
    raw.d[rho] = d;
  }
  return covariantJet(f, raw);
}

TransformCheck connectionTransformCheck(const GeometryInstance& geo, const TetradFrame& tf,
                                        const SpinElement& se) {
  FrameJets fj = frameJets(tf, std::min(tf.frame.order, 2));
  BConnection bc = bConnection(fj);
  CovJet<double> sJet = spinElementJet(geo, se, tf);

  FrameJets rotated = rotateFrameJets(fj, sJet);
  BConnection direct = bConnection(rotated);

  const Mv sInv = reverse(sJet.v);
  TransformCheck out;
  for (int mu = 0; mu < 4; ++mu) {
    const Mv law = sInv * bc.b[mu] * sJet.v - sInv * sJet.ups[mu];
    out.residual = std::max(out.residual, maxAbs(direct.b[mu] - law));

    const Mv sUpsInv = sJet.v * reverse(sJet.ups[mu]);
    const Mv off = sUpsInv - grade(sUpsInv, 2);
    out.offGrade = std::max(out.offGrade, maxAbs(off));
  }
  return out;
}

}  // namespace tforge
