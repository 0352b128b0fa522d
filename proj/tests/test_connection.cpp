#include <doctest.h>

#include <cmath>
#include <random>

#include "tforge/catalog.hpp"
#include "tforge/connection.hpp"
#include "test_helpers.hpp"

using namespace tforge;

using tforge::testing::randomField;
using tforge::testing::randomScalarExpr;

namespace {

Mv coeffReconstruction(const FrameJets& fj, const BConnection& bc, int mu) {
  Mv acc(fj.tf.frame.ctx);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      acc += wedge(fj.tf.up[a], fj.tf.up[b]) * bc.coeff[mu][a][b];
  return acc;
}

}  // namespace

TEST_CASE("flat cartesian connection forms vanish") {
  GeometryInstance geo(catalogGeometry("minkowski"));
  FrameJets fj = frameJets(tetradForms(buildFrame(geo, {0.1, -0.7, 2.0, 0.4})));
  BConnection bc = bConnection(fj);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(maxAbs(bc.b[mu]) <= 1e-14);
    for (int nu = 0; nu < 4; ++nu)
      CHECK(maxAbs(curvatureTwoForm(fj.tf.frame, bc, mu, nu)) <= 1e-12);
  }
}

TEST_CASE("connection forms are grade-2 and wedge equals Clifford product") {
  std::mt19937_64 rng(11);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 3; ++i) {
      FrameJets fj = frameJets(tetradForms(buildFrame(geo, samplePoint(geo, rng))));
      BConnection bc = bConnection(fj);
      CHECK(bc.wedgeCliffordGap <= 1e-10);
      CHECK(bc.offGradeResidual <= 1e-12);
    }
  }
}

TEST_CASE("frame coefficients reconstruct the connection forms") {
  std::mt19937_64 rng(12);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 3; ++i) {
      FrameJets fj = frameJets(tetradForms(buildFrame(geo, samplePoint(geo, rng))));
      BConnection bc = bConnection(fj);
      for (int mu = 0; mu < 4; ++mu) {
        CHECK(maxAbs(bc.b[mu] - coeffReconstruction(fj, bc, mu)) <= 1e-10);
        for (int a = 0; a < 4; ++a) {
          CHECK(bc.coeff[mu][a][a] == 0.0);
          for (int b = 0; b < 4; ++b) CHECK(bc.coeff[mu][a][b] == -bc.coeff[mu][b][a]);
        }
      }
    }
  }
}

TEST_CASE("matrix-calculus frame connection is twice the form coefficients") {
  std::mt19937_64 rng(13);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 3; ++i) {
      TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
      BConnection bc = bConnection(frameJets(tf));
      Ten3 omega = spinConnectionOracle(tf);
      for (int mu = 0; mu < 4; ++mu)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            CHECK(std::abs(omega[mu][a][b] - 2.0 * bc.coeff[mu][a][b]) <= 1e-9);
    }
  }
}

TEST_CASE("the coframe is parallel for the full connection") {
  std::mt19937_64 rng(14);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 2; ++i) {
      FrameJets fj = frameJets(tetradForms(buildFrame(geo, samplePoint(geo, rng))));
      BConnection bc = bConnection(fj);
      for (int a = 0; a < 4; ++a)
        for (int mu = 0; mu < 4; ++mu) CHECK(maxAbs(dApply(bc, fj.up[a], mu)) <= 1e-9);
    }
  }
}

TEST_CASE("covariant differentiation obeys the product rule") {
  std::mt19937_64 rng(15);
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  for (int i = 0; i < 2; ++i) {
    PointFrame f = buildFrame(geo, samplePoint(geo, rng));
    ExprField uf = randomField(rng), vf = randomField(rng);
    RawJet<double> uRaw = uf.rawJetReal(f, 1), vRaw = vf.rawJetReal(f, 1);
    CovJet<double> prod = covariantJet(f, rawMul(uRaw, vRaw));
    CovJet<double> leib = jetMul(covariantJet(f, uRaw), covariantJet(f, vRaw));
    CHECK(maxAbs(prod.v - leib.v) <= 1e-12);
    for (int mu = 0; mu < 4; ++mu) CHECK(maxAbs(prod.ups[mu] - leib.ups[mu]) <= 1e-9);
  }
}

TEST_CASE("the full connection obeys the product rule") {
  std::mt19937_64 rng(16);
  GeometryInstance geo(catalogGeometry("flrw"));
  for (int i = 0; i < 2; ++i) {
    PointFrame f = buildFrame(geo, samplePoint(geo, rng));
    BConnection bc = bConnection(frameJets(tetradForms(f)));
    ExprField uf = randomField(rng), vf = randomField(rng);
    RawJet<double> uRaw = uf.rawJetReal(f, 1), vRaw = vf.rawJetReal(f, 1);
    CovJet<double> u = covariantJet(f, uRaw), v = covariantJet(f, vRaw);
    CovJet<double> prod = covariantJet(f, rawMul(uRaw, vRaw));
    for (int mu = 0; mu < 4; ++mu) {
      Mv lhs = dApply(bc, prod, mu);
      Mv rhs = dApply(bc, u, mu) * v.v + u.v * dApply(bc, v, mu);
      CHECK(maxAbs(lhs - rhs) <= 1e-9);
    }
  }
}

TEST_CASE("slot derivative annihilates the soldering field and the metric") {
  std::mt19937_64 rng(17);
  for (const auto& name : {"schwarzschild", "flrw"}) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 2; ++i) {
      PointFrame f = buildFrame(geo, samplePoint(geo, rng));

      TensorFormJet<double> sol;
      sol.order = 1;
      sol.v = TensorForm<double>(f.ctx, 1, 0);
      for (int mu = 0; mu < 4; ++mu) sol.v.flat(mu) = basisForm(f.ctx, mu);
      for (auto& d : sol.d) d = TensorForm<double>(f.ctx, 1, 0);
      CHECK(maxAbs(upsilon(f, sol)) <= 1e-12);

      TensorFormJet<double> met;
      met.order = 1;
      met.v = TensorForm<double>(f.ctx, 0, 2);
      for (auto& d : met.d) d = TensorForm<double>(f.ctx, 0, 2);
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          met.v.at({mu, nu}) = Mv::scalar(f.ctx, f.g(mu, nu));
          for (int rho = 0; rho < 4; ++rho)
            met.d[rho].at({mu, nu}) = Mv::scalar(f.ctx, f.dg[rho][mu][nu]);
        }
      CHECK(maxAbs(upsilon(f, met)) <= 1e-11);
    }
  }
}

TEST_CASE("second full derivatives commute on multivector fields") {
  std::mt19937_64 rng(18);
  for (const auto& name : {"schwarzschild", "flrw"}) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 2; ++i) {
      PointFrame f = buildFrame(geo, samplePoint(geo, rng));
      BConnection bc = bConnection(frameJets(tetradForms(f)));
      CovJet<double> u = randomField(rng).covJetReal(f, 2);
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu)
          CHECK(maxAbs(dCommutator(f, bc, u, mu, nu)) <= 1e-8);
    }
  }
}

TEST_CASE("slot-bearing commutator is measured but unconstrained") {
  std::mt19937_64 rng(19);
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  PointFrame f = buildFrame(geo, samplePoint(geo, rng));
  FrameJets fj = frameJets(tetradForms(f));
  BConnection bc = bConnection(fj);
  std::array<CovJet<double>, 4> u;
  for (int s = 0; s < 4; ++s) u[s] = randomField(rng).covJetReal(f, 2);
  double largest = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      for (int s = 0; s < 4; ++s) {
        double r = maxAbs(dCommutatorSlot(f, bc, u, mu, nu, s));
        CHECK(std::isfinite(r));
        largest = std::max(largest, r);
      }
  MESSAGE("slot commutator magnitude ", largest);
}

TEST_CASE("curvature two-forms match the lowered curvature tensor") {
  std::mt19937_64 rng(20);
  for (const auto& name : {"schwarzschild", "flrw", "minkowski-spherical", "rindler"}) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 3; ++i) {
      PointFrame f = buildFrame(geo, samplePoint(geo, rng));
      BConnection bc = bConnection(frameJets(tetradForms(f)));
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          Mv c = curvatureTwoForm(f, bc, mu, nu);
          CHECK(maxAbs(c - curvatureFromRiemann(f, mu, nu)) <= 1e-8);
          CHECK(maxAbs(c + curvatureTwoForm(f, bc, nu, mu)) <= 1e-12);
        }
    }
  }
}

TEST_CASE("generator identity reproduces the connection forms") {
  std::mt19937_64 rng(21);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 2; ++i) {
      FrameJets fj = frameJets(tetradForms(buildFrame(geo, samplePoint(geo, rng))));
      BConnection bc = bConnection(fj);
      for (int mu = 0; mu < 4; ++mu)
        CHECK(maxAbs(bFromGenerators(fj, mu) - bc.b[mu]) <= 1e-9);
    }
  }
}

TEST_CASE("identity rotation leaves the connection forms unchanged") {
  std::mt19937_64 rng(22);
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
  SpinElement se = sampleSpinElement(tf, 9, 0.0);
  TransformCheck tc = connectionTransformCheck(geo, tf, se);
  CHECK(tc.residual <= 1e-12);
  CHECK(tc.offGrade <= 1e-12);
}

TEST_CASE("rotation law holds for constant-coefficient rotations") {
  std::mt19937_64 rng(23);
  for (const auto& name : {"schwarzschild", "flrw", "de-sitter-static"}) {
    GeometryInstance geo(catalogGeometry(name));
    for (std::uint64_t seed : {3, 4}) {
      TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
      SpinElement se = sampleSpinElement(tf, seed, 0.3);
      TransformCheck tc = connectionTransformCheck(geo, tf, se);
      CHECK(tc.residual <= 1e-9);
      CHECK(tc.offGrade <= 1e-9);
    }
  }
}

TEST_CASE("rotation law holds for position-dependent rotations") {
  std::mt19937_64 rng(24);
  for (const auto& name : {"minkowski", "schwarzschild"}) {
    GeometryInstance geo(catalogGeometry(name));
    TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
    SpinElement se = sampleSpinElement(tf, 5, 0.25, true);
    TransformCheck tc = connectionTransformCheck(geo, tf, se);
    CHECK(tc.residual <= 1e-5);
    CHECK(tc.offGrade <= 1e-5);
  }
}

TEST_CASE("field strength of an abelian potential is the coefficient curl") {
  std::mt19937_64 rng(25);
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  for (int trial = 0; trial < 2; ++trial) {
    PointFrame f = buildFrame(geo, samplePoint(geo, rng));
    FrameJets fj = frameJets(tetradForms(f));
    BConnection bc = bConnection(fj);
    CovJet<double> gen = jetScale(jetMul(fj.up[1], fj.up[2]), -1.0);

    std::array<Expression, 4> a;
    std::array<std::array<Expression, 16>, 4> comps{};
    for (int nu = 0; nu < 4; ++nu) {
      a[nu] = randomScalarExpr(rng);
      comps[nu][0] = a[nu];
    }
    std::array<CovJet<double>, 4> pot, zero;
    for (int nu = 0; nu < 4; ++nu) {
      pot[nu] = jetMul(ExprField(comps[nu]).covJetReal(f, 1), gen);
      zero[nu] = jetConstant<double>(f.ctx, Mv(f.ctx), 1);
    }
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        Mv fs = fieldStrength(f, bc, pot, mu, nu);
        double curl = a[nu].derivative(mu).evaluate(f.x) - a[mu].derivative(nu).evaluate(f.x);
        CHECK(maxAbs(fs - gen.v * curl) <= 1e-9);
        CHECK(maxAbs(fs + fieldStrength(f, bc, pot, nu, mu)) <= 1e-12);
        CHECK(maxAbs(fieldStrength(f, bc, zero, mu, nu)) == 0.0);
      }
  }
}

TEST_CASE("jet construction guards its preconditions") {
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  std::array<double, 4> x{0.0, 5.0, 1.3, 0.2};
  TetradFrame tf = tetradForms(buildFrame(geo, x));

  TetradFrame rotated = lorentzRotate(tf, sampleSpinElement(tf, 2, 0.2));
  CHECK_THROWS_AS(frameJets(rotated), GeometryError);

  FrameJets low = frameJets(tetradForms(buildFrame(geo, x, 1)));
  BConnection bc = bConnection(low);
  CHECK(bc.order == 0);
  CHECK_THROWS_AS(curvatureTwoForm(low.tf.frame, bc, 0, 1), GeometryError);

  std::mt19937_64 rng(26);
  PointFrame f = buildFrame(geo, x);
  BConnection full = bConnection(frameJets(tetradForms(f)));
  CovJet<double> shallow = randomField(rng).covJetReal(f, 1);
  CHECK_THROWS_AS(dCommutator(f, full, shallow, 0, 1), GeometryError);
}

TEST_CASE("rotating jets by unity reproduces the frame and connection") {
  std::mt19937_64 rng(27);
  GeometryInstance geo(catalogGeometry("flrw"));
  FrameJets fj = frameJets(tetradForms(buildFrame(geo, samplePoint(geo, rng))));
  CovJet<double> one = jetConstant(fj.tf.frame.ctx, Mv::scalar(fj.tf.frame.ctx, 1.0), 2);
  FrameJets rot = rotateFrameJets(fj, one);
  CHECK_FALSE(rot.tf.componentJets);
  BConnection a = bConnection(fj), b = bConnection(rot);
  for (int mu = 0; mu < 4; ++mu) CHECK(maxAbs(a.b[mu] - b.b[mu]) <= 1e-12);
}
