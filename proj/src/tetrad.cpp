#include "tforge/tetrad.hpp"

#include <cmath>
#include <random>

#include "tforge/blades.hpp"
#include "tforge/errors.hpp"

namespace tforge {

TetradFrame tetradForms(const PointFrame& frame) {
  Eigen::Matrix4d comp;
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a) comp(mu, a) = frame.e[mu][a];
  if (std::abs(comp.determinant()) < 1e-12)
    throw GeometryError("tetrad component matrix is singular");

  TetradFrame tf;
  tf.frame = frame;
  for (int a = 0; a < 4; ++a) {
    Mv form(frame.ctx);
    for (int mu = 0; mu < 4; ++mu) form.setCoeff(1u << mu, comp(mu, a));
    tf.up[a] = form;
    tf.down[a] = form * kFrameEta[a];
  }
  tf.inv = comp.inverse().transpose();
  return tf;
}

double frameContractionFactor(int k) {
  static constexpr std::array<double, 5> factor{4.0, -2.0, 0.0, 2.0, -4.0};
  return factor[static_cast<std::size_t>(k)];
}

SecondaryGenerators secondaryGenerators(const TetradFrame& tf) {
  SecondaryGenerators sg;
  sg.h = tf.up[0];
  sg.i = -(tf.up[1] * tf.up[2]);
  sg.k = -(tf.up[1] * tf.up[3]);
  sg.ell = tf.up[0] * tf.up[1] * tf.up[2] * tf.up[3];
  return sg;
}

bool isSpinElement(const Mv& s, double tol) {
  for (unsigned b = 0; b < 16; ++b)
    if (bladeGrade(b) % 2 == 1 && std::abs(s.coeff(b)) > tol) return false;
  Mv unit = reverse(s) * s;
  unit.setCoeff(0, unit.coeff(0) - 1.0);
  return maxAbs(unit) <= tol;
}

Mv spinGeneratorAt(const SpinElement& se, const TetradFrame& tf) {
  Mv beta(tf.frame.ctx);
  int pair = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b, ++pair) {
      double w = se.c[a][b];
      if (!se.factors.empty()) w *= se.factors[pair].evaluate(tf.frame.x);
      if (w != 0.0) beta += wedge(tf.up[a], tf.up[b]) * w;
    }
  return beta;
}

Mv spinElementAt(const SpinElement& se, const TetradFrame& tf) {
  return expm(spinGeneratorAt(se, tf));
}

SpinElement sampleSpinElement(const TetradFrame& tf, std::uint64_t seed, double scale,
                              bool positionDependent) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-scale, scale);
  std::uniform_real_distribution<double> phase(0.0, 6.28);

  SpinElement se;
  se.positionDependent = positionDependent;
  int pair = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b, ++pair) {
      se.c[a][b] = coeff(rng);
      se.c[b][a] = -se.c[a][b];
      if (positionDependent) {
        Expression arg = Expression::coordinate(pair % 4) + Expression::constant(phase(rng));
        se.factors.push_back(Expression::constant(1.0) +
                             Expression::constant(0.2) * sin(arg));
      }
    }
  se.beta = spinGeneratorAt(se, tf);
  se.s = expm(se.beta);
  return se;
}

TetradFrame lorentzRotate(const TetradFrame& tf, const SpinElement& se) {
  if (!isSpinElement(se.s))
    throw AlgebraError("rotation factor fails the spin membership test");
  const Mv sInv = reverse(se.s);

  TetradFrame out;
  out.frame = tf.frame;
  out.frame.de = {};
  out.frame.dde = {};
  out.frame.ddde = {};
  out.componentJets = false;

  Eigen::Matrix4d comp;
  for (int a = 0; a < 4; ++a) {
    out.up[a] = sInv * tf.up[a] * se.s;
    out.down[a] = out.up[a] * kFrameEta[a];
    for (int mu = 0; mu < 4; ++mu) {
      comp(mu, a) = out.up[a].coeff(1u << mu);
      out.frame.e[mu][a] = comp(mu, a);
    }
  }
  if (std::abs(comp.determinant()) < 1e-12)
    throw GeometryError("rotated tetrad component matrix is singular");
  out.inv = comp.inverse().transpose();
  return out;
}

}  // namespace tforge
