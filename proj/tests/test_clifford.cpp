#include <doctest.h>

#include <Eigen/Dense>
#include <array>
#include <random>

#include "test_helpers.hpp"
#include "tforge/multivector.hpp"
#include "tforge/tensor_form.hpp"

using namespace tforge;
using namespace tforge::testing;

namespace {

Mv dx(const ContextPtr& ctx, int mu) { return basisForm(ctx, mu); }

// 16x16 matrix of left Clifford multiplication by the 1-form a_mu dx^mu,
// assembled directly from wedge and contraction. Independent of the
// structure-table recursion used by operator*.
Eigen::Matrix<double, 16, 16> leftMulMatrix(const ContextPtr& ctx, const Eigen::Vector4d& a) {
  Eigen::Matrix<double, 16, 16> m = Eigen::Matrix<double, 16, 16>::Zero();
  for (unsigned b = 0; b < kBlades; ++b) {
    for (int mu = 0; mu < 4; ++mu) {
      if (a(mu) == 0.0) continue;
      const SignedBlade w = bladeWedge(1u << mu, b);
      if (w.sign != 0) m(w.blade, b) += a(mu) * w.sign;
      for (int nu = 0; nu < 4; ++nu) {
        const SignedBlade c = bladeContract(nu, b);
        if (c.sign != 0) m(c.blade, b) += a(mu) * ctx->gInv()(mu, nu) * c.sign;
      }
    }
  }
  return m;
}

Mv oneForm(const ContextPtr& ctx, const Eigen::Vector4d& a) {
  Mv m(ctx);
  for (int mu = 0; mu < 4; ++mu) m.setCoeff(1u << mu, a(mu));
  return m;
}

}  // namespace

TEST_CASE("blade combinatorics by hand") {
  CHECK(bladeWedge(0b0001, 0b0010).sign == 1);   // dx0 ^ dx1
  CHECK(bladeWedge(0b0001, 0b0010).blade == 0b0011);
  CHECK(bladeWedge(0b0010, 0b0001).sign == -1);  // dx1 ^ dx0
  CHECK(bladeWedge(0b0001, 0b0001).sign == 0);
  CHECK(bladeWedge(0b0011, 0b1100).sign == 1);   // (dx0^dx1) ^ (dx2^dx3)
  CHECK(bladeWedge(0b0101, 0b1010).sign == -1);  // (dx0^dx2) ^ (dx1^dx3): one swap

  CHECK(bladeContract(0, 0b0011).sign == 1);  // iota_0 (dx0^dx1) = dx1
  CHECK(bladeContract(0, 0b0011).blade == 0b0010);
  CHECK(bladeContract(1, 0b0011).sign == -1);  // iota_1 (dx0^dx1) = -dx0
  CHECK(bladeContract(1, 0b0011).blade == 0b0001);
  CHECK(bladeContract(2, 0b0011).sign == 0);

  CHECK(reversionSign(0) == 1);
  CHECK(reversionSign(1) == 1);
  CHECK(reversionSign(2) == -1);
  CHECK(reversionSign(3) == -1);
  CHECK(reversionSign(4) == 1);
}

TEST_CASE("generator products in Minkowski") {
  auto ctx = minkowskiContext();
  CHECK(maxAbs(dx(ctx, 0) * dx(ctx, 0) - Mv::scalar(ctx, 1.0)) == 0.0);
  CHECK(maxAbs(dx(ctx, 1) * dx(ctx, 1) + Mv::scalar(ctx, 1.0)) == 0.0);

  // (dx0^dx1)^2 = eta^00 eta^11 * (-1) = +1
  Mv b01 = wedge(dx(ctx, 0), dx(ctx, 1));
  CHECK(maxAbs(b01 * b01 - Mv::scalar(ctx, 1.0)) == 0.0);
}

TEST_CASE("generator anticommutation gives the inverse metric") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    auto ctx = randomContext(rng);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        Mv anti = dx(ctx, mu) * dx(ctx, nu) + dx(ctx, nu) * dx(ctx, mu);
        Mv want = Mv::scalar(ctx, 2.0 * ctx->gInv()(mu, nu));
        CHECK(maxAbs(anti - want) <= 1e-13);
      }
  }
}

TEST_CASE("wedge product basics") {
  std::mt19937_64 rng(1);
  auto ctx = randomContext(rng);
  CHECK(maxAbs(wedge(dx(ctx, 0), dx(ctx, 0))) == 0.0);
  CHECK(wedge(dx(ctx, 0), dx(ctx, 1)).coeff(0b0011) == 1.0);

  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Mv a = oneForm(ctx, Eigen::Vector4d::NullaryExpr([&](int) { return u(rng); }));
    Mv b = oneForm(ctx, Eigen::Vector4d::NullaryExpr([&](int) { return u(rng); }));
    CHECK(maxAbs(wedge(a, b) - 0.5 * (a * b - b * a)) <= 1e-14);
    // grade additivity
    Mv w = wedge(a, b);
    CHECK(maxAbs(w - grade(w, 2)) == 0.0);
  }
}

TEST_CASE("independent matrix oracle for the Clifford product") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    auto ctx = randomContext(rng);
    std::array<Eigen::Vector4d, 3> a;
    std::array<Eigen::Matrix<double, 16, 16>, 3> l;
    for (int k = 0; k < 3; ++k) {
      a[k] = Eigen::Vector4d::NullaryExpr([&](int) { return u(rng); });
      l[k] = leftMulMatrix(ctx, a[k]);
    }
    // u = a0 a1 a2 as pure matrix algebra acting on the unit scalar
    Eigen::Matrix<double, 16, 1> unit = Eigen::Matrix<double, 16, 1>::Zero();
    unit(0) = 1.0;
    Eigen::Matrix<double, 16, 1> uCoeffs = l[0] * (l[1] * (l[2] * unit));

    Mv uTable = oneForm(ctx, a[0]) * (oneForm(ctx, a[1]) * oneForm(ctx, a[2]));
    CHECK((uTable.coeffs() - uCoeffs).cwiseAbs().maxCoeff() <= 1e-13);

    Mv v = randomMv(rng, ctx);
    Mv prodTable = uTable * v;
    Eigen::Matrix<double, 16, 1> prodOracle = l[0] * (l[1] * (l[2] * v.coeffs()));
    CHECK((prodTable.coeffs() - prodOracle).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 4; ++c) {
    auto ctx = c == 0 ? minkowskiContext() : randomContext(rng);
    for (int trial = 0; trial < 50; ++trial) {
      Mv u = randomMv(rng, ctx), v = randomMv(rng, ctx), w = randomMv(rng, ctx);
      CHECK(maxAbs((u * v) * w - u * (v * w)) <= 1e-12 * (1 + maxAbs(u) * maxAbs(v) * maxAbs(w)));
    }
  }
}

TEST_CASE("grade projection decomposes exactly") {
  std::mt19937_64 rng(3);
  auto ctx = randomContext(rng);
  Mv u = randomMv(rng, ctx);
  Mv sum(ctx);
  for (int k = 0; k <= 4; ++k) sum += grade(u, k);
  CHECK(maxAbs(sum - u) == 0.0);

  CHECK(grade(Mv::scalar(ctx, 1.0) + dx(ctx, 0), 0).coeff(0) == 1.0);
  Mv ell = Mv::blade(ctx, 0b1111);
  CHECK(maxAbs(grade(ell, 4) - ell) == 0.0);
  // scalar part of dx0 dx1 is g^{01}
  CHECK(grade(dx(ctx, 0) * dx(ctx, 1), 0).coeff(0) == doctest::Approx(ctx->gInv()(0, 1)).epsilon(1e-14));
}

TEST_CASE("reversion") {
  std::mt19937_64 rng(5);
  auto ctx = randomContext(rng);
  CHECK(maxAbs(reverse(Mv::scalar(ctx, 3.0)) - Mv::scalar(ctx, 3.0)) == 0.0);
  Mv b01 = Mv::blade(ctx, 0b0011);
  CHECK(maxAbs(reverse(b01) + b01) == 0.0);
  for (int trial = 0; trial < 30; ++trial) {
    Mv u = randomMv(rng, ctx), v = randomMv(rng, ctx);
    CHECK(maxAbs(reverse(u * v) - reverse(v) * reverse(u)) <= 1e-13);
  }
}

TEST_CASE("exponential") {
  auto ctx = minkowskiContext();
  CHECK(maxAbs(expm(Mv(ctx)) - Mv::scalar(ctx, 1.0)) == 0.0);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = randomContext(rng);
    Mv beta = randomGrade(rng, c, 2);
    Mv s = expm(beta);
    CHECK(maxAbs(s * reverse(s) - Mv::scalar(c, 1.0)) <= 1e-12);
    CHECK(maxAbs(expm(beta) * expm(-beta) - Mv::scalar(c, 1.0)) <= 1e-12);
  }
  (void)u;
}

TEST_CASE("trace") {
  std::mt19937_64 rng(17);
  auto ctx = randomContext(rng);
  CHECK(trace(Mv::scalar(ctx, 5.0) + dx(ctx, 0)) == 5.0);
  CHECK(trace(wedge(dx(ctx, 0), dx(ctx, 1))) == 0.0);
  for (int trial = 0; trial < 30; ++trial) {
    Mv u = randomMv(rng, ctx), v = randomMv(rng, ctx);
    CHECK(trace(u * v) == doctest::Approx(trace(v * u)).epsilon(1e-12));
  }
}

TEST_CASE("commutator and bivector closure") {
  std::mt19937_64 rng(23);
  auto ctx = randomContext(rng);
  Mv u = randomMv(rng, ctx), v = randomMv(rng, ctx), w = randomMv(rng, ctx);
  CHECK(maxAbs(commutator(u, u)) == 0.0);
  CHECK(maxAbs(commutator(Mv::scalar(ctx, 1.0), v)) == 0.0);
  Mv jacobi = commutator(u, commutator(v, w)) + commutator(v, commutator(w, u)) +
              commutator(w, commutator(u, v));
  CHECK(maxAbs(jacobi) <= 1e-12 * (1 + maxAbs(u) * maxAbs(v) * maxAbs(w)));

  for (int trial = 0; trial < 30; ++trial) {
    Mv a = randomGrade(rng, ctx, 2), b = randomGrade(rng, ctx, 2);
    Mv comm = commutator(a, b);
    for (int k = 0; k <= 4; ++k) {
      if (k == 2) continue;
      CHECK(maxAbs(grade(comm, k)) <= 1e-12);
    }
  }
}

TEST_CASE("complex coefficients multiply consistently") {
  std::mt19937_64 rng(31);
  auto ctx = randomContext(rng);
  MvC u = randomMvC(rng, ctx), v = randomMvC(rng, ctx);
  MvC uv = u * v;
  // split into real/imaginary parts and recombine
  Mv ur = realPart(u), ui = imagPart(u), vr = realPart(v), vi = imagPart(v);
  Mv re = ur * vr - ui * vi;
  Mv im = ur * vi + ui * vr;
  CHECK(maxAbs(realPart(uv) - re) <= 1e-13);
  CHECK(maxAbs(imagPart(uv) - im) <= 1e-13);
  // mixed real*complex promotes
  MvC mixed = ur * v;
  CHECK(maxAbs(mixed - complexify(ur) * v) <= 1e-13);
}

TEST_CASE("derivative tables differentiate the structure coefficients") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  // linear metric field g(x) = g0 + x^rho d[rho], exact derivative d[rho]
  Eigen::Matrix4d g0 = randomMetric(rng, 0.2);
  std::array<Eigen::Matrix4d, 4> d;
  for (auto& m : d) {
    Eigen::Matrix4d r = Eigen::Matrix4d::NullaryExpr([&](int, int) { return u(rng); });
    m = 0.5 * (r + r.transpose());
  }
  MetricContext ctx(g0, d);

  const double h = 1e-6;
  for (int rho = 0; rho < 4; ++rho) {
    Eigen::Matrix4d gPlus = g0 + h * d[rho];
    Eigen::Matrix4d gMinus = g0 - h * d[rho];
    MetricContext cp(gPlus), cm(gMinus);
    for (unsigned i = 0; i < kBlades; ++i)
      for (unsigned j = 0; j < kBlades; ++j) {
        std::array<double, kBlades> fd{};
        for (const ProductTerm& t : cp.prod(i, j)) fd[t.blade] += t.w / (2 * h);
        for (const ProductTerm& t : cm.prod(i, j)) fd[t.blade] -= t.w / (2 * h);
        std::array<double, kBlades> an{};
        for (const ProductTerm& t : ctx.dProd(rho, i, j)) an[t.blade] = t.w;
        for (unsigned b = 0; b < kBlades; ++b) CHECK(std::abs(an[b] - fd[b]) <= 1e-7);
      }
  }
}

TEST_CASE("tensor forms hold shaped multivector entries") {
  std::mt19937_64 rng(53);
  auto ctx = randomContext(rng);
  TensorForm<double> t(ctx, 1, 1);
  CHECK(t.size() == 16);
  t.at({2, 3}) = Mv::scalar(ctx, 7.0);
  CHECK(t.at({2, 3}).coeff(0) == 7.0);
  CHECK(t.flat(2 * 4 + 3).coeff(0) == 7.0);

  TensorForm<double> s = t + t;
  CHECK(s.at({2, 3}).coeff(0) == 14.0);
  CHECK(maxAbs(s - t * 2.0) == 0.0);
}
