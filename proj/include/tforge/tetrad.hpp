#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tforge/expression.hpp"
#include "tforge/geometry.hpp"
#include "tforge/multivector.hpp"
#include "tforge/tensor_form.hpp"

namespace tforge {

// Frame metric diag(1,-1,-1,-1) used to raise and lower frame indices a,b.
inline constexpr std::array<double, 4> kFrameEta{1.0, -1.0, -1.0, -1.0};

// Orthonormal coframe at a point. up[a] is the grade-1 multivector with
// coordinate components frame.e[mu][a]; the four of them satisfy
// up[a]*up[b] + up[b]*up[a] = 2*eta^{ab}. down[a] = kFrameEta[a]*up[a], and
// inv(mu,a) inverts the component matrix: sum_mu inv(mu,a)*frame.e[mu][b]
// = delta_a^b and sum_a inv(mu,a)*frame.e[nu][a] = delta^mu_nu.
//
// componentJets is true when frame.de/dde/ddde describe up; a rotated frame
// clears the arrays and the flag because its forms no longer come from the
// expressions the frame was built from.
struct TetradFrame {
  PointFrame frame;
  std::array<Mv, 4> up;
  std::array<Mv, 4> down;
  Eigen::Matrix4d inv;
  bool componentJets = true;
};

// Builds the coframe from a point's tetrad components.
TetradFrame tetradForms(const PointFrame& frame);

// Scale frameContraction applies to a pure grade-k argument: (-1)^k*(4-2k),
// i.e. (4, -2, 0, 2, -4) for k = 0..4.
double frameContractionFactor(int k);

// sum_a up[a] * u * down[a].
template <typename S>
Multivector<S> frameContraction(const TetradFrame& tf, const Multivector<S>& u) {
  Multivector<S> acc(u.context());
  for (int a = 0; a < 4; ++a) acc += tf.up[a] * u * tf.down[a];
  return acc;
}

template <typename S>
TensorForm<S> frameContraction(const TetradFrame& tf, const TensorForm<S>& u) {
  TensorForm<S> out(u.context(), u.upperCount(), u.lowerCount());
  for (std::size_t i = 0; i < u.size(); ++i) out.flat(i) = frameContraction(tf, u.flat(i));
  return out;
}

// Distinguished frame elements: h = up[0], i = -up[1]*up[2], k = -up[1]*up[3],
// ell = up[0]*up[1]*up[2]*up[3]. They regenerate the coframe:
// up[0] = h, up[1] = i*k*ell*h, up[2] = k*ell*h, up[3] = -i*ell*h.
struct SecondaryGenerators {
  Mv h;
  Mv i;
  Mv k;
  Mv ell;
};

SecondaryGenerators secondaryGenerators(const TetradFrame& tf);

// Even real multivector s with reverse(s)*s = 1, produced as the exponential
// of a frame bivector beta = sum_{a<b} c[a][b]*f_ab(x) * up[a]^up[b].
// The factors f_ab (slot order 01, 02, 03, 12, 13, 23) are expressions over
// the raw coordinates; an empty vector means every f_ab = 1.
struct SpinElement {
  Mv s;
  Mv beta;
  std::array<std::array<double, 4>, 4> c{};
  std::vector<Expression> factors;
  bool positionDependent = false;
};

// Membership test for the rotation group: even, reverse(s)*s = 1 within tol.
bool isSpinElement(const Mv& s, double tol = 1e-10);

// Generator and group element re-evaluated against another coframe (same
// coefficient data, different point).
Mv spinGeneratorAt(const SpinElement& se, const TetradFrame& tf);
Mv spinElementAt(const SpinElement& se, const TetradFrame& tf);

// Random spin element: bivector coefficients uniform in [-scale, scale];
// positionDependent multiplies each by a smooth coordinate factor.
SpinElement sampleSpinElement(const TetradFrame& tf, std::uint64_t seed, double scale,
                              bool positionDependent = false);

// Rotated coframe: up[a] -> reverse(s) * up[a] * s. The point's metric data
// is unchanged (the frame metric is preserved), so frame.g and the curvature
// fields carry over; component derivative arrays are cleared.
TetradFrame lorentzRotate(const TetradFrame& tf, const SpinElement& se);

}  // namespace tforge
