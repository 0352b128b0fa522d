#pragma once

#include <Eigen/Dense>
#include <array>

#include "tforge/connection.hpp"

namespace tforge {

// Primitive idempotent t = 1/4 (1+H)(1-iI) and the left-ideal basis
// t1 = t, t2 = Kt, t3 = -I l t, t4 = -KI l t, with the 16x4 matrix T of
// their blade coordinates. Satisfies t*t = t, Ht = t, It = it.
struct IdealBasis {
  MvC t;
  std::array<MvC, 4> tk;
  Eigen::Matrix<Complex, 16, 4> T;
};

IdealBasis idealBasis(const SecondaryGenerators& sg);

// Matrix of left multiplication on the ideal: U tk = gammaOf(U)(n,k) tn.
// Throws when U tk leaves the span of the basis beyond roundoff.
Eigen::Matrix4cd gammaOf(const MvC& u, const IdealBasis& basis);
inline Eigen::Matrix4cd gammaOf(const Mv& u, const IdealBasis& basis) {
  return gammaOf(complexify(u), basis);
}

// Coordinates of psi*t in the ideal basis.
Eigen::Vector4cd decomposeSpinor(const MvC& psi, const IdealBasis& basis);

// frame[a] = gammaOf(e^a): constant matrices obeying the flat anticommutation
// relations. coord[mu] = gammaOf(dx^mu) = frame[c] * e^mu_c.
struct GammaRep {
  std::array<Eigen::Matrix4cd, 4> frame;
  std::array<Eigen::Matrix4cd, 4> coord;
};

GammaRep gammaRep(const TetradFrame& tf, const IdealBasis& basis);

// Left side of the first-order form equation
//   dx^mu (D_mu Psi + a_mu Psi I + B_mu Psi) + m Psi H I
// at one point; zero iff Psi solves it there.
MvC tensorDiracResidual(const BConnection& bc, const SecondaryGenerators& sg,
                        const CovJet<Complex>& psi, const std::array<double, 4>& a, double m);

// 1/4 b_{mu ab} [gamma^a, gamma^b]; equals gammaOf(B_mu).
Eigen::Matrix4cd spinTerm(const GammaRep& rep, const Ten3& b, int mu);

// Left side of the 4x4 matrix equation
//   gamma^mu (d_mu psi + i a_mu psi + spinTerm_mu psi) + i m psi.
Eigen::Vector4cd matrixDiracResidual(const GammaRep& rep, const Ten3& b,
                                     const Eigen::Vector4cd& psi,
                                     const std::array<Eigen::Vector4cd, 4>& dPsi,
                                     const std::array<double, 4>& a, double m);

// Both sides of the reduction at one point: the tensor residual multiplied
// by t and decomposed in the ideal basis, against the matrix residual for
// psi = decomposeSpinor(Psi) with finite-difference coordinate derivatives.
struct ReductionPair {
  Eigen::Vector4cd tensorSide;
  Eigen::Vector4cd matrixSide;
  double gap = 0.0;
  double psiNorm = 0.0;
  double gammaBResidual = 0.0;
};

ReductionPair reductionEquivalence(const GeometryInstance& geo, const std::array<double, 4>& x,
                                   const ExprField& psiField, const std::array<Expression, 4>& a,
                                   double m);

}  // namespace tforge
