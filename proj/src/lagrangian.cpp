#include "tforge/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace tforge {

CovJet<double> connectionForm(const PointFrame& f, const BConnection& bc) {
  if (bc.order < 1) throw GeometryError("connection form needs first-order connection jets");
  const ContextPtr ctx = bc.b[0].context();
  CovJet<double> out;
  out.order = 1;
  Mv v(ctx);
  for (int nu = 0; nu < 4; ++nu) v += basisForm<double>(ctx, nu) * bc.b[nu];
  out.v = v;
  for (int mu = 0; mu < 4; ++mu) {
    Mv acc(ctx);
    for (int nu = 0; nu < 4; ++nu) {
      Mv slot = bc.ups[mu][nu];
      for (int lam = 0; lam < 4; ++lam) slot -= bc.b[lam] * f.gamma[mu][nu][lam];
      acc += basisForm<double>(ctx, nu) * slot;
    }
    out.ups[mu] = acc;
  }
  return out;
}

double l2Density(const PointFrame& f) {
  if (f.order < 2) throw GeometryError("l2 density needs an order-2 frame");
  const TetradFrame tf = tetradForms(f);
  const FrameJets fj = frameJets(tf);
  const BConnection bc = bConnection(fj);
  return f.R + 4.0 * codifferentialValue(f, connectionForm(f, bc)).coeff(0);
}

double l2Density(const GeometryInstance& geo, const std::array<double, 4>& x) {
  return l2Density(buildFrame(geo, x, 2));
}

SecondDerivativeReport secondDerivativeCheck(const GeometryInstance& geo,
                                             const std::array<double, 4>& x, int trials,
                                             std::uint64_t seed, double amplitude) {
  const PointFrame base = buildFrame(geo, x, 2);
  TetradJet jet;
  jet.x = x;
  jet.order = 2;
  jet.e = base.e;
  jet.de = base.de;
  jet.dde = base.dde;

  const PointFrame baseline = frameFromJet(jet);
  const double l2Base = l2Density(baseline);
  const double rBase = baseline.R;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-amplitude, amplitude);

  SecondDerivativeReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    for (int attempt = 0;; ++attempt) {
      TetradJet bumped = jet;
      for (int r = 0; r < 4; ++r)
        for (int s = r; s < 4; ++s)
          for (int mu = 0; mu < 4; ++mu)
            for (int a = 0; a < 4; ++a) {
              const double q = unif(rng);
              bumped.dde[r][s][mu][a] += q;
              if (s != r) bumped.dde[s][r][mu][a] += q;
            }
      try {
        const PointFrame pert = frameFromJet(bumped);
        rep.l2Deviation = std::max(rep.l2Deviation, std::abs(l2Density(pert) - l2Base));
        rep.curvatureDeviation = std::max(rep.curvatureDeviation, std::abs(pert.R - rBase));
        break;
      } catch (const GeometryError&) {
        if (attempt >= 99) throw;
      }
    }
  }
  return rep;
}

const char* conjugationName(Conjugation c) {
  switch (c) {
    case Conjugation::ReverseConjugate:
      return "reverse-conjugate";
    case Conjugation::Reverse:
      return "reverse";
    case Conjugation::Conjugate:
      return "conjugate";
    case Conjugation::Identity:
      return "identity";
  }
  return "unknown";
}

MvC starOf(const MvC& u, Conjugation c) {
  switch (c) {
    case Conjugation::ReverseConjugate:
      return reverse(conjugate(u));
    case Conjugation::Reverse:
      return reverse(u);
    case Conjugation::Conjugate:
      return conjugate(u);
    case Conjugation::Identity:
      return u;
  }
  return u;
}

MvC configN(const EquationConfig& cfg, const ContextPtr& ctx) {
  if (cfg.n) return *cfg.n;
  return MvC::scalar(ctx, Complex(1.0, 0.0));
}

MvC configE(const EquationConfig& cfg, const SecondaryGenerators& sg) {
  if (cfg.e) return *cfg.e;
  return complexify(sg.h * sg.i) * -1.0;
}

MvC diracOperand(const BConnection& bc, const SecondaryGenerators& sg, const CovJet<Complex>& psi,
                 const std::array<CovJet<Complex>, 4>& a, const EquationConfig& cfg) {
  const ContextPtr ctx = psi.v.context();
  MvC acc(ctx);
  for (int mu = 0; mu < 4; ++mu) {
    MvC slot = dApply(bc, psi, mu);
    slot += psi.v * a[mu].v;
    slot += bc.b[mu] * psi.v;
    acc += basisForm<Complex>(ctx, mu) * slot;
  }
  return acc * configN(cfg, ctx) - psi.v * configE(cfg, sg) * cfg.m;
}

DensityReport l0l1Density(const GeometryInstance& geo, const std::array<double, 4>& x,
                          const ExprField& psi, const std::array<ExprField, 4>& a,
                          const EquationConfig& cfg) {
  const PointOperators op = pointOperators(geo, x, 2);
  const PointFrame& f = op.fj.tf.frame;

  const CovJet<Complex> psiJet = psi.covJet(f, 1);
  std::array<CovJet<Complex>, 4> aJet;
  for (int nu = 0; nu < 4; ++nu) aJet[nu] = a[nu].covJet(f, 1);

  const MvC p = diracOperand(op.bc, op.sg, psiJet, aJet, cfg);
  const MvC combo =
      complexify(op.tf.up[0]) * (starOf(psiJet.v, cfg.star) * p + starOf(p, cfg.star) * psiJet.v);

  DensityReport out;
  out.star = cfg.star;
  out.l0 = 2.0 * combo.coeff(0).real();

  std::array<std::array<MvC, 4>, 4> fv;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) fv[m][n] = fieldStrength(f, op.bc, aJet, m, n);
  Complex trace(0.0, 0.0);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      MvC up(f.ctx);
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be) {
          const double w = f.gInv(m, al) * f.gInv(n, be);
          if (w != 0.0) up += fv[al][be] * w;
        }
      trace += (fv[m][n] * up).coeff(0);
    }
  out.l1 = 0.25 * trace.real();
  return out;
}

MainResiduals mainResiduals(const GeometryInstance& geo, const std::array<double, 4>& x,
                            const ExprField& psi, const std::array<ExprField, 4>& a,
                            const EquationConfig& cfg, const SourceTerms& src) {
  const double tScale = 1.0 + src.t.cwiseAbs().maxCoeff();
  if ((src.t - src.t.transpose()).cwiseAbs().maxCoeff() > 1e-12 * tScale)
    throw GeometryError("energy-momentum source must be symmetric");

  const PointOperators op = pointOperators(geo, x, 2);
  const PointFrame& f = op.fj.tf.frame;

  const CovJet<Complex> psiJet = psi.covJet(f, 1);
  std::array<CovJet<Complex>, 4> aJet;
  for (int nu = 0; nu < 4; ++nu) aJet[nu] = a[nu].covJet(f, 2);

  MainResiduals out;
  out.dirac = diracOperand(op.bc, op.sg, psiJet, aJet, cfg);

  std::array<std::array<MvC, 4>, 4> fv;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) fv[m][n] = fieldStrength(f, op.bc, aJet, m, n);

  // Upsilon_r of dA(m, n) = Upsilon_m A_n - Gamma_{mn}^lam A_lam - [B_m, A_n]
  auto upsDA = [&](int r, int m, int n) {
    MvC d = aJet[n].upsUps[r][m];
    for (int lam = 0; lam < 4; ++lam) {
      d -= aJet[lam].ups[r] * f.gamma[m][n][lam];
      d -= aJet[lam].v * f.dGamma[r][m][n][lam];
    }
    d -= commutator(op.bc.ups[r][m], aJet[n].v);
    d -= commutator(op.bc.b[m], aJet[n].ups[r]);
    return d;
  };

  // Upsilon_r F_{mn}, Leibniz over F = dA(m,n) - dA(n,m) - [A_m, A_n]
  std::array<std::array<std::array<MvC, 4>, 4>, 4> dF;
  for (int r = 0; r < 4; ++r)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        dF[r][m][n] = upsDA(r, m, n) - upsDA(r, n, m) - commutator(aJet[m].ups[r], aJet[n].v) -
                      commutator(aJet[m].v, aJet[n].ups[r]);

  for (int nu = 0; nu < 4; ++nu) {
    MvC acc(f.ctx);
    for (int mu = 0; mu < 4; ++mu)
      for (int al = 0; al < 4; ++al) {
        if (f.gInv(mu, al) == 0.0) continue;
        for (int be = 0; be < 4; ++be) {
          const double w = f.gInv(mu, al) * f.gInv(nu, be);
          if (w == 0.0) continue;
          MvC dlow = dF[mu][al][be];
          for (int lam = 0; lam < 4; ++lam) {
            dlow -= fv[lam][be] * f.gamma[mu][al][lam];
            dlow -= fv[al][lam] * f.gamma[mu][be][lam];
          }
          dlow -= commutator(op.bc.b[mu], fv[al][be]);
          acc += dlow * w;
        }
      }
    for (int mu = 0; mu < 4; ++mu) {
      MvC fup(f.ctx);
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be) {
          const double w = f.gInv(mu, al) * f.gInv(nu, be);
          if (w != 0.0) fup += fv[al][be] * w;
        }
      acc -= commutator(aJet[mu].v, fup);
    }
    if (src.j[nu]) acc -= *src.j[nu];
    out.gauge[nu] = acc;
  }

  out.einstein = einsteinTensor(f) + src.t;
  return out;
}

PointOperators pointOperators(const GeometryInstance& geo, const std::array<double, 4>& x,
                              int order) {
  TetradFrame tf = tetradForms(buildFrame(geo, x, order));
  FrameJets fj = frameJets(tf);
  BConnection bc = bConnection(fj);
  SecondaryGenerators sg = secondaryGenerators(tf);
  return PointOperators{std::move(tf), std::move(fj), std::move(bc), std::move(sg)};
}

std::array<Expression, 16> iGeneratorField(const GeometryInstance& geo) {
  const auto& def = geo.definition();
  std::array<std::array<Expression, 4>, 4> e;
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a) e[mu][a] = def.e[mu][a].bind(geo.params());
  std::array<Expression, 16> out;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const unsigned b = (1u << mu) | (1u << nu);
      out[b] = -(e[mu][1] * e[nu][2] - e[nu][1] * e[mu][2]);
    }
  return out;
}

std::array<ExprField, 4> abelianPotential(const GeometryInstance& geo,
                                          const std::array<Expression, 4>& a) {
  const std::array<Expression, 16> gen = iGeneratorField(geo);
  auto mk = [&](int nu) {
    std::array<Expression, 16> comps;
    for (int b = 0; b < kBlades; ++b) comps[b] = a[nu] * gen[b];
    return ExprField(comps);
  };
  return {mk(0), mk(1), mk(2), mk(3)};
}

}  // namespace tforge
