#include "tforge/dirac.hpp"

#include <cmath>

#include "tforge/errors.hpp"

namespace tforge {

namespace {

Eigen::Matrix<Complex, 16, 1> bladeVector(const MvC& u) {
  Eigen::Matrix<Complex, 16, 1> v;
  for (unsigned b = 0; b < static_cast<unsigned>(kBlades); ++b) v(b) = u.coeff(b);
  return v;
}

// least-squares coordinates of the columns of rhs in the basis, requiring the
// residual to vanish within roundoff of the input scale
template <int N>
Eigen::Matrix<Complex, 4, N> idealSolve(const IdealBasis& basis,
                                        const Eigen::Matrix<Complex, 16, N>& rhs) {
  Eigen::Matrix<Complex, 4, N> x =
      Eigen::ColPivHouseholderQR<Eigen::Matrix<Complex, 16, 4>>(basis.T).solve(rhs);
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
  if ((basis.T * x - rhs).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw AlgebraError("element does not act on the ideal");
  return x;
}

}  // namespace

IdealBasis idealBasis(const SecondaryGenerators& sg) {
  const ContextPtr& ctx = sg.h.context();
  const MvC h = complexify(sg.h), i = complexify(sg.i), k = complexify(sg.k),
            ell = complexify(sg.ell);
  const MvC one = MvC::scalar(ctx, Complex(1, 0));
  const Complex iu(0, 1);

  IdealBasis out;
  out.t = (one + h) * (one - i * iu) * 0.25;
  out.tk[0] = out.t;
  out.tk[1] = k * out.t;
  out.tk[2] = i * ell * out.t * (-1.0);
  out.tk[3] = k * i * ell * out.t * (-1.0);
  for (int n = 0; n < 4; ++n) out.T.col(n) = bladeVector(out.tk[n]);

  Eigen::ColPivHouseholderQR<Eigen::Matrix<Complex, 16, 4>> qr(out.T);
  qr.setThreshold(1e-10);
  if (qr.rank() != 4) throw AlgebraError("ideal basis is rank deficient");
  return out;
}

Eigen::Matrix4cd gammaOf(const MvC& u, const IdealBasis& basis) {
  Eigen::Matrix<Complex, 16, 4> rhs;
  for (int n = 0; n < 4; ++n) rhs.col(n) = bladeVector(u * basis.tk[n]);
  return idealSolve<4>(basis, rhs);
}

Eigen::Vector4cd decomposeSpinor(const MvC& psi, const IdealBasis& basis) {
  return idealSolve<1>(basis, bladeVector(psi * basis.t));
}

GammaRep gammaRep(const TetradFrame& tf, const IdealBasis& basis) {
  GammaRep rep;
  for (int a = 0; a < 4; ++a) rep.frame[a] = gammaOf(tf.up[a], basis);
  for (int mu = 0; mu < 4; ++mu)
    rep.coord[mu] = gammaOf(basisForm(tf.frame.ctx, mu), basis);
  return rep;
}

MvC tensorDiracResidual(const BConnection& bc, const SecondaryGenerators& sg,
                        const CovJet<Complex>& psi, const std::array<double, 4>& a, double m) {
  const ContextPtr& ctx = psi.v.context();
  const MvC iForm = complexify(sg.i);
  MvC out = psi.v * complexify(sg.h * sg.i) * m;
  for (int mu = 0; mu < 4; ++mu) {
    MvC slot = dApply(bc, psi, mu);
    slot += psi.v * iForm * a[mu];
    slot += bc.b[mu] * psi.v;
    out += basisForm<Complex>(ctx, mu) * slot;
  }
  return out;
}

Eigen::Matrix4cd spinTerm(const GammaRep& rep, const Ten3& b, int mu) {
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      if (b[mu][a][c] != 0.0)
        acc += 0.25 * b[mu][a][c] * (rep.frame[a] * rep.frame[c] - rep.frame[c] * rep.frame[a]);
  return acc;
}

Eigen::Vector4cd matrixDiracResidual(const GammaRep& rep, const Ten3& b,
                                     const Eigen::Vector4cd& psi,
                                     const std::array<Eigen::Vector4cd, 4>& dPsi,
                                     const std::array<double, 4>& a, double m) {
  const Complex iu(0, 1);
  Eigen::Vector4cd out = iu * m * psi;
  for (int mu = 0; mu < 4; ++mu)
    out += rep.coord[mu] * (dPsi[mu] + iu * a[mu] * psi + spinTerm(rep, b, mu) * psi);
  return out;
}

ReductionPair reductionEquivalence(const GeometryInstance& geo, const std::array<double, 4>& x,
                                   const ExprField& psiField, const std::array<Expression, 4>& a,
                                   double m) {
  PointFrame f = buildFrame(geo, x);
  TetradFrame tf = tetradForms(f);
  FrameJets fj = frameJets(tf);
  BConnection bc = bConnection(fj);
  SecondaryGenerators sg = secondaryGenerators(tf);
  IdealBasis basis = idealBasis(sg);
  GammaRep rep = gammaRep(tf, basis);

  std::array<double, 4> aVals{};
  for (int mu = 0; mu < 4; ++mu) aVals[mu] = a[mu].evaluate(x);

  CovJet<Complex> psi = psiField.covJet(f, 1);
  MvC rTensor = tensorDiracResidual(bc, sg, psi, aVals, m);

  ReductionPair pair;
  pair.tensorSide = decomposeSpinor(rTensor, basis);

  // spinor coordinates of Psi at a point, rebuilt from scratch so the
  // finite-difference derivative sees the basis variation
  auto spinorAt = [&](const std::array<double, 4>& p) {
    PointFrame fp = buildFrame(geo, p, 1);
    IdealBasis bp = idealBasis(secondaryGenerators(tetradForms(fp)));
    return decomposeSpinor(psiField.rawJet(fp, 0).v, bp);
  };

  Eigen::Vector4cd psiCol = decomposeSpinor(psi.v, basis);
  std::array<Eigen::Vector4cd, 4> dPsi;
  for (int rho = 0; rho < 4; ++rho) {
    double h = 3e-4 * (1.0 + std::abs(x[rho]));
    bool ok = false;
    for (int shrink = 0; shrink <= 8 && !ok; h *= 0.5, ++shrink) {
      ok = true;
      for (double step : {-2.0 * h, -h, h, 2.0 * h}) {
        std::array<double, 4> p = x;
        p[rho] += step;
        ok = ok && geo.inDomainBox(p) && !geo.excluded(p);
      }
      if (ok) break;
    }
    if (!ok) throw GeometryError("finite-difference stencil does not fit inside the domain");
    auto shifted = [&](double step) {
      std::array<double, 4> p = x;
      p[rho] += step;
      return spinorAt(p);
    };
    dPsi[rho] = (shifted(-2.0 * h) - 8.0 * shifted(-h) + 8.0 * shifted(h) - shifted(2.0 * h)) /
                (12.0 * h);
  }

  pair.matrixSide = matrixDiracResidual(rep, bc.coeff, psiCol, dPsi, aVals, m);
  pair.gap = (pair.tensorSide - pair.matrixSide).cwiseAbs().maxCoeff();
  pair.psiNorm = psiCol.cwiseAbs().maxCoeff();
  for (int mu = 0; mu < 4; ++mu) {
    Eigen::Matrix4cd diff = gammaOf(bc.b[mu], basis) - spinTerm(rep, bc.coeff, mu);
    pair.gammaBResidual = std::max(pair.gammaBResidual, diff.cwiseAbs().maxCoeff());
  }
  return pair;
}

}  // namespace tforge
