#pragma once

#include <algorithm>
#include <array>
#include <optional>

#include "tforge/blades.hpp"
#include "tforge/expression.hpp"
#include "tforge/geometry.hpp"
#include "tforge/multivector.hpp"
#include "tforge/tensor_form.hpp"

namespace tforge {

// Raw pointwise jet of a multivector field: blade coefficients and their
// coordinate partials, stored in multivector containers on the point's
// context. Entries beyond `order` are unset.
template <typename S>
struct RawJet {
  int order = 0;
  Multivector<S> v;
  std::array<Multivector<S>, 4> d{};
  std::array<std::array<Multivector<S>, 4>, 4> dd{};
};

// Covariant pointwise jet. ups[mu] is the form-level covariant derivative
// along mu (each form index corrected by the connection). upsUps[mu][nu]
// applies the mu-derivative to the fixed-nu field ups[nu] with no correction
// on the nu label itself, so the tensorial second derivative is
// upsUps[mu][nu] - sum_lam gamma[mu][nu][lam]*ups[lam].
template <typename S>
struct CovJet {
  int order = 0;
  Multivector<S> v;
  std::array<Multivector<S>, 4> ups{};
  std::array<std::array<Multivector<S>, 4>, 4> upsUps{};
};

// Form-level covariant derivative along rho of a single multivector, given
// the raw partials of its coefficients.
template <typename S>
Multivector<S> formCovariant(const PointFrame& f, const Multivector<S>& v,
                             const Multivector<S>& dRho, int rho) {
  Multivector<S> out = dRho;
  for (unsigned b = 1; b < static_cast<unsigned>(kBlades); ++b) {
    S acc = S(0);
    for (int alpha = 0; alpha < 4; ++alpha) {
      if (!(b & (1u << alpha))) continue;
      for (int lam = 0; lam < 4; ++lam) {
        const SignedBlade rep = bladeReplace(b, alpha, lam);
        if (rep.sign == 0) continue;
        acc += v.coeff(rep.blade) * (f.gamma[rho][alpha][lam] * rep.sign);
      }
    }
    out.setCoeff(b, out.coeff(b) - acc);
  }
  return out;
}

template <typename S>
CovJet<S> covariantJet(const PointFrame& f, const RawJet<S>& raw) {
  CovJet<S> out;
  out.order = raw.order;
  out.v = raw.v;
  if (raw.order >= 1)
    for (int rho = 0; rho < 4; ++rho) out.ups[rho] = formCovariant(f, raw.v, raw.d[rho], rho);
  if (raw.order >= 2) {
    if (f.order < 2) throw GeometryError("second covariant derivatives need connection derivatives");
    for (int nu = 0; nu < 4; ++nu)
      for (int mu = 0; mu < 4; ++mu) {
        // raw partial along mu of the fixed-nu field ups[nu]
        Multivector<S> dW = raw.dd[mu][nu];
        for (unsigned b = 1; b < static_cast<unsigned>(kBlades); ++b) {
          S acc = S(0);
          for (int alpha = 0; alpha < 4; ++alpha) {
            if (!(b & (1u << alpha))) continue;
            for (int lam = 0; lam < 4; ++lam) {
              const SignedBlade rep = bladeReplace(b, alpha, lam);
              if (rep.sign == 0) continue;
              acc += raw.v.coeff(rep.blade) * (f.dGamma[mu][nu][alpha][lam] * rep.sign);
              acc += raw.d[mu].coeff(rep.blade) * (f.gamma[nu][alpha][lam] * rep.sign);
            }
          }
          dW.setCoeff(b, dW.coeff(b) - acc);
        }
        out.upsUps[mu][nu] = formCovariant(f, out.ups[nu], dW, mu);
      }
  }
  return out;
}

// Product of raw jets to first order; the derivative of the structure
// coefficients enters through the context's derivative tables.
template <typename A, typename B>
RawJet<detail::ProductScalar<A, B>> rawMul(const RawJet<A>& u, const RawJet<B>& v) {
  using R = detail::ProductScalar<A, B>;
  const MetricContext& ctx = *u.v.context();
  if (!ctx.hasDerivatives())
    throw AlgebraError("raw jet product needs a context with derivative tables");
  RawJet<R> out;
  out.order = std::min({u.order, v.order, 1});
  out.v = u.v * v.v;
  for (int rho = 0; rho < 4; ++rho) {
    Multivector<R> d = u.d[rho] * v.v + u.v * v.d[rho];
    for (unsigned i = 0; i < static_cast<unsigned>(kBlades); ++i) {
      const A ui = u.v.coeff(i);
      if (ui == A(0)) continue;
      for (unsigned j = 0; j < static_cast<unsigned>(kBlades); ++j) {
        const B vj = v.v.coeff(j);
        if (vj == B(0)) continue;
        for (const ProductTerm& t : ctx.dProd(rho, i, j))
          d.setCoeff(t.blade, d.coeff(t.blade) + ui * vj * t.w);
      }
    }
    out.d[rho] = d;
  }
  return out;
}

template <typename A, typename B>
CovJet<detail::ProductScalar<A, B>> jetMul(const CovJet<A>& u, const CovJet<B>& v) {
  CovJet<detail::ProductScalar<A, B>> out;
  out.order = std::min(u.order, v.order);
  out.v = u.v * v.v;
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = u.ups[mu] * v.v + u.v * v.ups[mu];
  if (out.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        out.upsUps[mu][nu] = u.upsUps[mu][nu] * v.v + u.ups[mu] * v.ups[nu] +
                             u.ups[nu] * v.ups[mu] + u.v * v.upsUps[mu][nu];
  return out;
}

template <typename A, typename B>
CovJet<detail::ProductScalar<A, B>> jetWedge(const CovJet<A>& u, const CovJet<B>& v) {
  CovJet<detail::ProductScalar<A, B>> out;
  out.order = std::min(u.order, v.order);
  out.v = wedge(u.v, v.v);
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = wedge(u.ups[mu], v.v) + wedge(u.v, v.ups[mu]);
  if (out.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        out.upsUps[mu][nu] = wedge(u.upsUps[mu][nu], v.v) + wedge(u.ups[mu], v.ups[nu]) +
                             wedge(u.ups[nu], v.ups[mu]) + wedge(u.v, v.upsUps[mu][nu]);
  return out;
}

template <typename S>
CovJet<S> jetAdd(const CovJet<S>& u, const CovJet<S>& v) {
  CovJet<S> out;
  out.order = std::min(u.order, v.order);
  out.v = u.v + v.v;
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = u.ups[mu] + v.ups[mu];
  if (out.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) out.upsUps[mu][nu] = u.upsUps[mu][nu] + v.upsUps[mu][nu];
  return out;
}

template <typename S, typename W>
CovJet<S> jetScale(const CovJet<S>& u, W w) {
  CovJet<S> out = u;
  out.v = out.v * w;
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = out.ups[mu] * w;
  if (out.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) out.upsUps[mu][nu] = out.upsUps[mu][nu] * w;
  return out;
}

template <typename S>
CovJet<S> jetReverse(const CovJet<S>& u) {
  CovJet<S> out;
  out.order = u.order;
  out.v = reverse(u.v);
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = reverse(u.ups[mu]);
  if (out.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) out.upsUps[mu][nu] = reverse(u.upsUps[mu][nu]);
  return out;
}

template <typename S>
double jetMaxAbs(const CovJet<S>& u) {
  double m = maxAbs(u.v);
  for (int mu = 0; mu < 4; ++mu) m = std::max(m, maxAbs(u.ups[mu]));
  if (u.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) m = std::max(m, maxAbs(u.upsUps[mu][nu]));
  return m;
}

// Jet with vanishing covariant derivatives: exact for scalar constants and
// the seed for power series.
template <typename S>
CovJet<S> jetConstant(const ContextPtr& ctx, const Multivector<S>& v, int order) {
  CovJet<S> out;
  out.order = order;
  out.v = v;
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = Multivector<S>(ctx);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) out.upsUps[mu][nu] = Multivector<S>(ctx);
  return out;
}

template <typename S>
CovJet<S> jetExp(const CovJet<S>& u) {
  const ContextPtr& ctx = u.v.context();
  CovJet<S> result = jetConstant(ctx, Multivector<S>::scalar(ctx, S(1)), u.order);
  CovJet<S> term = result;
  for (int n = 1; n <= 64; ++n) {
    term = jetScale(jetMul(term, u), 1.0 / n);
    result = jetAdd(result, term);
    if (jetMaxAbs(term) <= 1e-16 * jetMaxAbs(result)) return result;
  }
  throw AlgebraError("jet exponential series did not converge");
}

inline CovJet<Complex> complexifyJet(const CovJet<double>& u) {
  CovJet<Complex> out;
  out.order = u.order;
  out.v = complexify(u.v);
  for (int mu = 0; mu < 4; ++mu) out.ups[mu] = complexify(u.ups[mu]);
  if (out.order >= 2)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) out.upsUps[mu][nu] = complexify(u.upsUps[mu][nu]);
  return out;
}

// Covariant jet of the coframe 1-form e^a from the frame's component data.
CovJet<double> coframeJet(const PointFrame& f, int a, int order);

// Tensor of multivectors with raw coefficient partials.
template <typename S>
struct TensorFormJet {
  int order = 0;
  TensorForm<S> v;
  std::array<TensorForm<S>, 4> d{};
};

// Covariant derivative of a tensor of forms: output shape (p, q+1) with the
// derivative index inserted between the upper and lower slots. Form indices
// use the connection blade rule; tensor slots use the usual up/down rules.
template <typename S>
TensorForm<S> upsilon(const PointFrame& f, const TensorFormJet<S>& t) {
  if (t.order < 1) throw GeometryError("tensor jet lacks first partials");
  const int p = t.v.upperCount(), q = t.v.lowerCount(), n = p + q;
  TensorForm<S> out(t.v.context(), p, q + 1);
  const std::size_t sz = t.v.size();

  auto slotOf = [&](std::size_t idx, int slot) {
    return static_cast<int>((idx >> (2 * (n - 1 - slot))) & 3u);
  };
  auto withSlot = [&](std::size_t idx, int slot, int val) {
    const int shift = 2 * (n - 1 - slot);
    return (idx & ~(std::size_t(3) << shift)) | (std::size_t(val) << shift);
  };

  for (std::size_t idx = 0; idx < sz; ++idx)
    for (int mu = 0; mu < 4; ++mu) {
      std::size_t oidx = 0;
      for (int s = 0; s < p; ++s) oidx = oidx * 4 + static_cast<std::size_t>(slotOf(idx, s));
      oidx = oidx * 4 + static_cast<std::size_t>(mu);
      for (int s = p; s < n; ++s) oidx = oidx * 4 + static_cast<std::size_t>(slotOf(idx, s));

      Multivector<S> acc = formCovariant(f, t.v.flat(idx), t.d[mu].flat(idx), mu);
      for (int s = 0; s < n; ++s) {
        const int is = slotOf(idx, s);
        const bool upper = s < p;
        for (int lam = 0; lam < 4; ++lam) {
          const double w = upper ? f.gamma[lam][mu][is] : -f.gamma[is][mu][lam];
          if (w != 0.0) acc += t.v.flat(withSlot(idx, s, lam)) * w;
        }
      }
      out.flat(oidx) = acc;
    }
  return out;
}

// Multivector field defined by one expression per blade coefficient, with an
// optional imaginary channel. Derivative expressions are cached on
// construction; evaluation is pointwise.
class ExprField {
 public:
  explicit ExprField(const std::array<Expression, 16>& re);
  ExprField(const std::array<Expression, 16>& re, const std::array<Expression, 16>& im);

  bool isComplex() const { return im_.has_value(); }

  RawJet<double> rawJetReal(const PointFrame& f, int order) const;
  RawJet<Complex> rawJet(const PointFrame& f, int order) const;
  CovJet<double> covJetReal(const PointFrame& f, int order) const;
  CovJet<Complex> covJet(const PointFrame& f, int order) const;

 private:
  struct Channel {
    std::array<Expression, 16> v;
    std::array<std::array<Expression, 16>, 4> d1;
    std::array<std::array<std::array<Expression, 16>, 4>, 4> d2;
  };
  static Channel makeChannel(const std::array<Expression, 16>& comps);
  static void fill(const Channel& ch, const std::array<double, 4>& x, int order,
                   RawJet<double>& out);

  Channel re_;
  std::optional<Channel> im_;
};

}  // namespace tforge
