#pragma once

#include <array>

#include "tforge/fields.hpp"
#include "tforge/tetrad.hpp"

namespace tforge {

// Coframe with covariant jets of each 1-form up[a].
struct FrameJets {
  TetradFrame tf;
  int order = 1;
  std::array<CovJet<double>, 4> up;
};

// Jets from the frame's symbolic component derivatives. order defaults to
// the deepest the frame supports (capped at 2).
FrameJets frameJets(const TetradFrame& tf, int order = -1);

// Rotated coframe jets: up[a] -> reverse(s) * up[a] * s with s tracked by its
// own jet. The rotated TetradFrame is rebuilt from the new form values.
FrameJets rotateFrameJets(const FrameJets& fj, const CovJet<double>& sJet);

// Grade-2 connection forms B_mu = -1/4 e^a (Upsilon_mu e_a) with frame
// coefficients coeff[mu][a][b] solving B_mu = sum_{a<b} coeff[mu][a][b]
// up[a]^up[b], antisymmetric in (a,b).
struct BConnection {
  std::array<Mv, 4> b;
  Ten3 coeff{};
  int order = 0;  // 1 when ups is filled
  // ups[mu][nu]: form-level derivative along mu of the fixed-nu field B_nu
  std::array<std::array<Mv, 4>, 4> ups{};
  double wedgeCliffordGap = 0.0;   // |wedge form - Clifford form|, should vanish
  double offGradeResidual = 0.0;   // coefficient mass outside grade 2
};

BConnection bConnection(const FrameJets& fj);

// Independent frame-connection coefficients from matrix calculus:
// omega[mu][a][b] = eta_{ac} * e_nu^c (partial_mu e^nu_b + Gamma_{mu lam}^nu e^lam_b),
// antisymmetric in (a,b). Satisfies omega[mu][a][b] = 2 * coeff[mu][a][b]:
// with B_mu = sum_{a<b} coeff e^a^e^b, the derivative operator
// partial_mu + (1/4) omega_{mu ab} gamma^a gamma^b of the standard spinor
// equation carries the same bivector as B_mu.
Ten3 spinConnectionOracle(const TetradFrame& tf);

// D_mu f = Upsilon_mu f - [B_mu, f] for a plain multivector field.
template <typename S>
Multivector<S> dApply(const BConnection& bc, const CovJet<S>& f, int mu) {
  return f.ups[mu] - commutator(bc.b[mu], f.v);
}

// D_mu on a tensor-of-forms jet: the mu-slice of the covariant derivative
// minus the bracket on every component. Output keeps the input shape.
template <typename S>
TensorForm<S> dOperator(const PointFrame& f, const BConnection& bc, const TensorFormJet<S>& t,
                        int mu) {
  TensorForm<S> full = upsilon(f, t);
  const int p = t.v.upperCount(), q = t.v.lowerCount();
  std::size_t head = 1, tail = 1;
  for (int i = 0; i < p; ++i) head *= 4;
  for (int i = 0; i < q; ++i) tail *= 4;
  TensorForm<S> out(t.v.context(), p, q);
  for (std::size_t u = 0; u < head; ++u)
    for (std::size_t l = 0; l < tail; ++l)
      out.flat(u * tail + l) = full.flat((u * 4 + static_cast<std::size_t>(mu)) * tail + l) -
                               commutator(bc.b[mu], t.v.flat(u * tail + l));
  return out;
}

// Commutator (D_mu D_nu - D_nu D_mu) applied to a multivector field with no
// extra slots; vanishes for the Levi-Civita-compatible connection.
template <typename S>
Multivector<S> dCommutator(const PointFrame& f, const BConnection& bc, const CovJet<S>& u,
                           int mu, int nu) {
  if (u.order < 2 || bc.order < 1) throw GeometryError("commutator needs order-2 field jets");
  std::array<Multivector<S>, 4> w;
  for (int s = 0; s < 4; ++s) w[s] = u.ups[s] - commutator(bc.b[s], u.v);
  auto dw = [&](int m, int n) {
    // form-level derivative along m of the fixed-n field w[n]
    return u.upsUps[m][n] - commutator(bc.ups[m][n], u.v) - commutator(bc.b[n], u.ups[m]);
  };
  auto dSlot = [&](int m, int n) {
    Multivector<S> r = dw(m, n);
    for (int lam = 0; lam < 4; ++lam) r -= w[lam] * f.gamma[m][n][lam];
    r -= commutator(bc.b[m], w[n]);
    return r;
  };
  return dSlot(mu, nu) - dSlot(nu, mu);
}

// The same commutator on a covector-slot field u[sigma]; the value is
// reported by the suites rather than asserted to vanish.
template <typename S>
Multivector<S> dCommutatorSlot(const PointFrame& f, const BConnection& bc,
                               const std::array<CovJet<S>, 4>& u, int mu, int nu, int sigma) {
  if (u[0].order < 2 || bc.order < 1) throw GeometryError("commutator needs order-2 field jets");
  auto x = [&](int n, int s) {
    Multivector<S> r = u[s].ups[n] - commutator(bc.b[n], u[s].v);
    for (int lam = 0; lam < 4; ++lam) r -= u[lam].v * f.gamma[n][s][lam];
    return r;
  };
  auto dx = [&](int m, int n, int s) {
    // form-level derivative along m of the fixed-(n,s) field x(n,s)
    Multivector<S> r = u[s].upsUps[m][n] - commutator(bc.ups[m][n], u[s].v) -
                       commutator(bc.b[n], u[s].ups[m]);
    for (int lam = 0; lam < 4; ++lam) {
      r -= u[lam].ups[m] * f.gamma[n][s][lam];
      r -= u[lam].v * f.dGamma[m][n][s][lam];
    }
    return r;
  };
  auto dSlot = [&](int m, int n, int s) {
    Multivector<S> r = dx(m, n, s);
    for (int lam = 0; lam < 4; ++lam) {
      r -= x(lam, s) * f.gamma[m][n][lam];
      r -= x(n, lam) * f.gamma[m][s][lam];
    }
    r -= commutator(bc.b[m], x(n, s));
    return r;
  };
  return dSlot(mu, nu, sigma) - dSlot(nu, mu, sigma);
}

// Curvature 2-form: C_mn = 2*(D_m B_n - D_n B_m + [B_m, B_n]) with B treated
// as a covector-slot field. Antisymmetric in (m, n).
Mv curvatureTwoForm(const PointFrame& f, const BConnection& bc, int mu, int nu);

// Expected curvature 2-form from the metric pipeline:
// sum_{a<b} Rlow[mu][nu][a][b] dx^a^dx^b.
Mv curvatureFromRiemann(const PointFrame& f, int mu, int nu);

// Connection form from the distinguished generators; agrees with
// bConnection's b[mu].
Mv bFromGenerators(const FrameJets& fj, int mu);

// Gauge field strength F_mn = D_m A_n - D_n A_m - [A_m, A_n] for a
// covector-slot field A.
template <typename S>
Multivector<S> fieldStrength(const PointFrame& f, const BConnection& bc,
                             const std::array<CovJet<S>, 4>& a, int mu, int nu) {
  auto dA = [&](int m, int n) {
    Multivector<S> r = a[n].ups[m];
    for (int lam = 0; lam < 4; ++lam) r -= a[lam].v * f.gamma[m][n][lam];
    r -= commutator(bc.b[m], a[n].v);
    return r;
  };
  return dA(mu, nu) - dA(nu, mu) - commutator(a[mu].v, a[nu].v);
}

// Jet of a spin element at the frame's point: the symbolic chain through the
// coframe jets when the generator coefficients are constant, otherwise
// central differences on the group element's coefficients (geo rebuilds the
// frame at displaced points).
CovJet<double> spinElementJet(const GeometryInstance& geo, const SpinElement& se,
                              const TetradFrame& tf);

// Residuals of the rotation law. direct: B computed from the rotated coframe.
// law: reverse(s)*B_mu*s - reverse(s)*(Upsilon_mu s). offGrade: how far
// s*(Upsilon_mu reverse(s)) strays from pure grade 2.
struct TransformCheck {
  double residual = 0.0;
  double offGrade = 0.0;
};

TransformCheck connectionTransformCheck(const GeometryInstance& geo, const TetradFrame& tf,
                                        const SpinElement& se);

}  // namespace tforge
