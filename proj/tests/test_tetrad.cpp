#include <doctest.h>

#include <cmath>
#include <random>

#include "tforge/catalog.hpp"
#include "tforge/tetrad.hpp"
#include "test_helpers.hpp"

using namespace tforge;

namespace {

Mv anticommutator(const Mv& u, const Mv& v) { return u * v + v * u; }

// max over (a,b) of |up[a]up[b] + up[b]up[a] - 2 eta^{ab}|
double frameRelationResidual(const TetradFrame& tf) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Mv r = anticommutator(tf.up[a], tf.up[b]);
      double eta = (a == b) ? 2.0 * kFrameEta[a] : 0.0;
      r.setCoeff(0, r.coeff(0) - eta);
      worst = std::max(worst, maxAbs(r));
    }
  return worst;
}

}  // namespace

TEST_CASE("flat cartesian coframe is the coordinate basis") {
  GeometryInstance geo(catalogGeometry("minkowski"));
  PointFrame f = buildFrame(geo, {0.3, -1.0, 0.5, 2.0});
  TetradFrame tf = tetradForms(f);
  for (int a = 0; a < 4; ++a) {
    Mv diff = tf.up[a] - basisForm(f.ctx, a);
    CHECK(maxAbs(diff) == 0.0);
  }
  CHECK((tf.inv - Eigen::Matrix4d::Identity()).norm() == 0.0);
  CHECK(maxAbs(tf.down[0] - tf.up[0]) == 0.0);
  CHECK(maxAbs(tf.down[2] + tf.up[2]) == 0.0);
}

TEST_CASE("static spherical mass coframe matches the defining components") {
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  PointFrame f = buildFrame(geo, {0.0, 4.0, 1.5707963267948966, 0.0});
  TetradFrame tf = tetradForms(f);
  CHECK(tf.up[0].coeff(0b0001) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(tf.up[2].coeff(0b0100) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("coframe anticommutators reproduce the frame metric everywhere") {
  std::mt19937_64 rng(71);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 10; ++i) {
      TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
      CHECK(frameRelationResidual(tf) <= 1e-10);
    }
  }
}

TEST_CASE("inverse components invert the tetrad matrix both ways") {
  std::mt19937_64 rng(72);
  GeometryInstance geo(catalogGeometry("de-sitter-static"));
  TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double dot = 0.0;
      for (int mu = 0; mu < 4; ++mu) dot += tf.inv(mu, a) * tf.frame.e[mu][b];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      double dot = 0.0;
      for (int a = 0; a < 4; ++a) dot += tf.inv(mu, a) * tf.frame.e[nu][a];
      CHECK(dot == doctest::Approx(mu == nu ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("contraction against the frame scales pure grades by (4,-2,0,2,-4)") {
  std::mt19937_64 rng(73);
  for (const auto& name : {"minkowski-spherical", "schwarzschild", "flrw"}) {
    GeometryInstance geo(catalogGeometry(name));
    for (int i = 0; i < 5; ++i) {
      TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
      for (int k = 0; k <= 4; ++k) {
        Mv u = testing::randomGrade(rng, tf.frame.ctx, k);
        Mv diff = frameContraction(tf, u) - u * frameContractionFactor(k);
        CHECK(maxAbs(diff) <= 1e-10 * std::max(1.0, maxAbs(u)));
      }
    }
  }
}

TEST_CASE("contraction against the frame handles scalars and frame forms") {
  std::mt19937_64 rng(74);
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));

  Mv one = Mv::scalar(tf.frame.ctx, 1.0);
  CHECK(maxAbs(frameContraction(tf, one) - one * 4.0) <= 1e-12);
  CHECK(maxAbs(frameContraction(tf, tf.up[0]) + tf.up[0] * 2.0) <= 1e-10);

  // complexified and tensor-shaped arguments go component-wise
  MvC w = testing::randomMvC(rng, tf.frame.ctx);
  MvC byParts = complexify(frameContraction(tf, realPart(w))) +
                complexify(frameContraction(tf, imagPart(w))) * Complex(0.0, 1.0);
  CHECK(maxAbs(frameContraction(tf, w) - byParts) <= 1e-12);

  TensorForm<double> t(tf.frame.ctx, 0, 1);
  for (int mu = 0; mu < 4; ++mu) t.at({mu}) = testing::randomGrade(rng, tf.frame.ctx, 1);
  TensorForm<double> ct = frameContraction(tf, t);
  for (int mu = 0; mu < 4; ++mu)
    CHECK(maxAbs(ct.at({mu}) + t.at({mu}) * 2.0) <= 1e-10);
}

TEST_CASE("frame forms contract to the algebra dimension") {
  std::mt19937_64 rng(75);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
    Mv sum(tf.frame.ctx);
    for (int a = 0; a < 4; ++a) sum += tf.up[a] * tf.down[a];
    sum.setCoeff(0, sum.coeff(0) - 4.0);
    CHECK(maxAbs(sum) <= 1e-12);
  }
}

TEST_CASE("secondary generators obey their defining relations") {
  std::mt19937_64 rng(76);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
    SecondaryGenerators sg = secondaryGenerators(tf);

    Mv i2 = sg.i * sg.i;
    i2.setCoeff(0, i2.coeff(0) + 1.0);
    CHECK(maxAbs(i2) <= 1e-12);

    CHECK(maxAbs(sg.h - tf.up[0]) == 0.0);
    CHECK(maxAbs(sg.i * sg.k * sg.ell * sg.h - tf.up[1]) <= 1e-10);
    CHECK(maxAbs(sg.k * sg.ell * sg.h - tf.up[2]) <= 1e-10);
    CHECK(maxAbs(sg.i * sg.ell * sg.h + tf.up[3]) <= 1e-10);

    CHECK(maxAbs(grade(sg.h, 1) - sg.h) == 0.0);
    CHECK(maxAbs(grade(sg.i, 2) - sg.i) <= 1e-14);
    CHECK(maxAbs(grade(sg.k, 2) - sg.k) <= 1e-14);
    CHECK(maxAbs(grade(sg.ell, 4) - sg.ell) <= 1e-14);
  }
}

TEST_CASE("flat-space volume generator is the coordinate volume form") {
  GeometryInstance geo(catalogGeometry("minkowski"));
  TetradFrame tf = tetradForms(buildFrame(geo, {0.0, 0.0, 0.0, 0.0}));
  SecondaryGenerators sg = secondaryGenerators(tf);
  for (unsigned b = 0; b < 16; ++b)
    CHECK(sg.ell.coeff(b) == doctest::Approx(b == 0b1111 ? 1.0 : 0.0).scale(1.0));
}

TEST_CASE("sampled spin elements satisfy the membership test") {
  std::mt19937_64 rng(77);
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));

  SpinElement trivial = sampleSpinElement(tf, 7, 0.0);
  CHECK(maxAbs(trivial.s - Mv::scalar(tf.frame.ctx, 1.0)) == 0.0);

  SpinElement se = sampleSpinElement(tf, 7, 0.3);
  CHECK(isSpinElement(se.s, 1e-12));
  CHECK(maxAbs(grade(se.beta, 2) - se.beta) <= 1e-14);

  Mv unit = reverse(se.s) * se.s;
  unit.setCoeff(0, unit.coeff(0) - 1.0);
  CHECK(maxAbs(unit) <= 1e-12);
}

TEST_CASE("position-dependent spin elements stay on the group across the domain") {
  std::mt19937_64 rng(78);
  GeometryInstance geo(catalogGeometry("flrw"));
  TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
  SpinElement se = sampleSpinElement(tf, 11, 0.3, true);
  CHECK(se.positionDependent);
  CHECK(se.factors.size() == 6);
  for (int i = 0; i < 5; ++i) {
    TetradFrame other = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
    Mv s = spinElementAt(se, other);
    CHECK(isSpinElement(s, 1e-12));
    // the element genuinely varies from point to point
    if (i == 0)
      CHECK((s.coeffs() - spinElementAt(se, tf).coeffs()).cwiseAbs().maxCoeff() > 1e-6);
  }
}

TEST_CASE("identity rotation returns the same coframe") {
  GeometryInstance geo(catalogGeometry("rindler"));
  TetradFrame tf = tetradForms(buildFrame(geo, {0.1, 0.4, -0.2, 0.3}));
  SpinElement id = sampleSpinElement(tf, 1, 0.0);
  TetradFrame rot = lorentzRotate(tf, id);
  for (int a = 0; a < 4; ++a) CHECK(maxAbs(rot.up[a] - tf.up[a]) == 0.0);
  CHECK_FALSE(rot.componentJets);
}

TEST_CASE("rotation in the 1-2 plane fixes the time form") {
  GeometryInstance geo(catalogGeometry("schwarzschild"));
  TetradFrame tf = tetradForms(buildFrame(geo, {0.0, 5.0, 1.2, 0.7}));
  SpinElement se;
  se.c[1][2] = 0.5;  // exp(0.5 * up[1]^up[2]) rotates the 1-2 plane only
  se.c[2][1] = -0.5;
  se.beta = spinGeneratorAt(se, tf);
  se.s = expm(se.beta);
  TetradFrame rot = lorentzRotate(tf, se);
  CHECK(maxAbs(rot.up[0] - tf.up[0]) <= 1e-12);
  CHECK(maxAbs(rot.up[3] - tf.up[3]) <= 1e-12);
  CHECK(maxAbs(rot.up[1] - tf.up[1]) > 1e-3);
}

TEST_CASE("rotations preserve the frame relation and the metric") {
  std::mt19937_64 rng(79);
  for (const auto& name : catalogNames()) {
    GeometryInstance geo(catalogGeometry(name));
    TetradFrame tf = tetradForms(buildFrame(geo, samplePoint(geo, rng)));
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      SpinElement se = sampleSpinElement(tf, 100 + seed, 0.4);
      TetradFrame rot = lorentzRotate(tf, se);
      CHECK(frameRelationResidual(rot) <= 1e-10);

      // rotated forms are still pure grade 1
      for (int a = 0; a < 4; ++a)
        CHECK(maxAbs(rot.up[a] - grade(rot.up[a], 1)) <= 1e-12);

      // metric rebuilt from rotated components equals the original
      Eigen::Matrix4d gRot = Eigen::Matrix4d::Zero();
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          for (int a = 0; a < 4; ++a)
            gRot(mu, nu) += rot.frame.e[mu][a] * rot.frame.e[nu][a] * kFrameEta[a];
      CHECK((gRot - tf.frame.g).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("rotation rejects a factor that is not on the group") {
  GeometryInstance geo(catalogGeometry("minkowski"));
  TetradFrame tf = tetradForms(buildFrame(geo, {0.0, 0.0, 0.0, 0.0}));
  SpinElement bad;
  bad.s = Mv::scalar(tf.frame.ctx, 1.0) + basisForm(tf.frame.ctx, 1) * 0.3;
  CHECK_THROWS_AS(lorentzRotate(tf, bad), AlgebraError);
}

TEST_CASE("degenerate component matrix is rejected") {
  GeometryInstance geo(catalogGeometry("minkowski"));
  PointFrame f = buildFrame(geo, {0.0, 0.0, 0.0, 0.0});
  for (int a = 0; a < 4; ++a) f.e[1][a] = f.e[0][a];
  CHECK_THROWS_AS(tetradForms(f), GeometryError);
}
