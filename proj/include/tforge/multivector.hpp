#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <type_traits>

#include "tforge/blades.hpp"
#include "tforge/errors.hpp"
#include "tforge/metric.hpp"

namespace tforge {

using Complex = std::complex<double>;

// Element of the Clifford algebra of differential forms at one point,
// stored as coefficients over the 16 basis blades. The metric context fixes
// the Clifford product; binary operations require compatible contexts.
template <typename S>
class Multivector {
 public:
  using Coeffs = Eigen::Matrix<S, kBlades, 1>;

  Multivector() : c_(Coeffs::Zero()) {}
  explicit Multivector(ContextPtr ctx) : c_(Coeffs::Zero()), ctx_(std::move(ctx)) {}
  Multivector(ContextPtr ctx, const Coeffs& coeffs) : c_(coeffs), ctx_(std::move(ctx)) {}

  static Multivector zero(ContextPtr ctx) { return Multivector(std::move(ctx)); }
  static Multivector scalar(ContextPtr ctx, S value) {
    Multivector m(std::move(ctx));
    m.c_[0] = value;
    return m;
  }
  static Multivector blade(ContextPtr ctx, unsigned b, S coeff = S(1)) {
    Multivector m(std::move(ctx));
    m.c_[b] = coeff;
    return m;
  }

  const ContextPtr& context() const { return ctx_; }
  const Coeffs& coeffs() const { return c_; }
  Coeffs& coeffs() { return c_; }
  S coeff(unsigned b) const { return c_[b]; }
  void setCoeff(unsigned b, S v) { c_[b] = v; }

  Multivector& operator+=(const Multivector& o) {
    adoptContext(o);
    c_ += o.c_;
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    adoptContext(o);
    c_ -= o.c_;
    return *this;
  }
  Multivector& operator*=(S s) {
    c_ *= s;
    return *this;
  }
  Multivector& operator/=(S s) {
    c_ /= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(const Multivector& a) { return Multivector(a.ctx_, -a.c_); }

 private:
  // Sums may start from a default-constructed accumulator; pick up the other
  // operand's context, otherwise insist on compatibility.
  void adoptContext(const Multivector& o) {
    if (!ctx_) {
      ctx_ = o.ctx_;
      return;
    }
    if (o.ctx_ && !compatibleContexts(ctx_, o.ctx_))
      throw AlgebraError("multivector operands have incompatible metric contexts");
  }

  Coeffs c_;
  ContextPtr ctx_;
};

using Mv = Multivector<double>;
using MvC = Multivector<Complex>;

namespace detail {
inline double absOf(double v) { return std::abs(v); }
inline double absOf(const Complex& v) { return std::abs(v); }
template <typename A, typename B>
using ProductScalar = decltype(std::declval<A>() * std::declval<B>());
}  // namespace detail

template <typename A, typename B>
void requireCompatible(const Multivector<A>& u, const Multivector<B>& v) {
  if (!u.context() || !v.context()) throw AlgebraError("multivector has no metric context");
  if (!compatibleContexts(u.context(), v.context()))
    throw AlgebraError("multivector operands have incompatible metric contexts");
}

// Clifford product via the context's structure table.
template <typename A, typename B>
Multivector<detail::ProductScalar<A, B>> operator*(const Multivector<A>& u, const Multivector<B>& v) {
  requireCompatible(u, v);
  using R = detail::ProductScalar<A, B>;
  const MetricContext& ctx = *u.context();
  Multivector<R> out(u.context());
  for (unsigned i = 0; i < kBlades; ++i) {
    const A a = u.coeff(i);
    if (a == A(0)) continue;
    for (unsigned j = 0; j < kBlades; ++j) {
      const B b = v.coeff(j);
      if (b == B(0)) continue;
      const R ab = a * b;
      for (const ProductTerm& t : ctx.prod(i, j)) out.coeffs()[t.blade] += t.w * ab;
    }
  }
  return out;
}

// Exterior product; independent of the metric.
template <typename A, typename B>
Multivector<detail::ProductScalar<A, B>> wedge(const Multivector<A>& u, const Multivector<B>& v) {
  requireCompatible(u, v);
  using R = detail::ProductScalar<A, B>;
  Multivector<R> out(u.context());
  for (unsigned i = 0; i < kBlades; ++i) {
    const A a = u.coeff(i);
    if (a == A(0)) continue;
    for (unsigned j = 0; j < kBlades; ++j) {
      const B b = v.coeff(j);
      if (b == B(0)) continue;
      const SignedBlade w = bladeWedge(i, j);
      if (w.sign != 0) out.coeffs()[w.blade] += static_cast<double>(w.sign) * (a * b);
    }
  }
  return out;
}

template <typename A, typename B>
Multivector<detail::ProductScalar<A, B>> commutator(const Multivector<A>& u, const Multivector<B>& v) {
  return u * v - v * u;
}

// Projection onto the grade-k component.
template <typename S>
Multivector<S> grade(const Multivector<S>& u, int k) {
  Multivector<S> out(u.context());
  for (unsigned b = 0; b < kBlades; ++b)
    if (bladeGrade(b) == k) out.setCoeff(b, u.coeff(b));
  return out;
}

// Reversal anti-automorphism: sign (-1)^{k(k-1)/2} on grade k.
template <typename S>
Multivector<S> reverse(const Multivector<S>& u) {
  Multivector<S> out(u.context());
  for (unsigned b = 0; b < kBlades; ++b)
    out.setCoeff(b, static_cast<double>(reversionSign(bladeGrade(b))) * u.coeff(b));
  return out;
}

// Normalized trace: the grade-0 coefficient.
template <typename S>
S trace(const Multivector<S>& u) {
  return u.coeff(0);
}

template <typename S>
double maxAbs(const Multivector<S>& u) {
  double m = 0.0;
  for (unsigned b = 0; b < kBlades; ++b) m = std::max(m, detail::absOf(u.coeff(b)));
  return m;
}

// Power series exponential. Convergence is monitored term by term.
template <typename S>
Multivector<S> expm(const Multivector<S>& u) {
  if (!u.context()) throw AlgebraError("multivector has no metric context");
  Multivector<S> result = Multivector<S>::scalar(u.context(), S(1));
  Multivector<S> term = result;
  for (int n = 1; n <= 64; ++n) {
    term = term * u / S(static_cast<double>(n));
    result += term;
    if (maxAbs(term) <= 1e-16 * maxAbs(result)) return result;
  }
  throw AlgebraError("multivector exponential did not converge");
}

inline MvC complexify(const Mv& u) {
  MvC out(u.context());
  for (unsigned b = 0; b < kBlades; ++b) out.setCoeff(b, Complex(u.coeff(b), 0.0));
  return out;
}

inline MvC complexify(const MvC& u) { return u; }

inline Mv realPart(const MvC& u) {
  Mv out(u.context());
  for (unsigned b = 0; b < kBlades; ++b) out.setCoeff(b, u.coeff(b).real());
  return out;
}

inline Mv imagPart(const MvC& u) {
  Mv out(u.context());
  for (unsigned b = 0; b < kBlades; ++b) out.setCoeff(b, u.coeff(b).imag());
  return out;
}

inline MvC conjugate(const MvC& u) {
  MvC out(u.context());
  for (unsigned b = 0; b < kBlades; ++b) out.setCoeff(b, std::conj(u.coeff(b)));
  return out;
}

inline Mv conjugate(const Mv& u) { return u; }

template <typename S>
Multivector<S> operator*(const Multivector<S>& u, double s) {
  Multivector<S> out = u;
  out.coeffs() *= S(s);
  return out;
}
template <typename S>
Multivector<S> operator*(double s, const Multivector<S>& u) {
  return u * s;
}
template <typename S>
Multivector<S> operator/(const Multivector<S>& u, double s) {
  Multivector<S> out = u;
  out.coeffs() /= S(s);
  return out;
}

inline MvC operator*(const Mv& u, Complex s) {
  MvC out = complexify(u);
  out.coeffs() *= s;
  return out;
}
inline MvC operator*(Complex s, const Mv& u) { return u * s; }
inline MvC operator*(const MvC& u, Complex s) {
  MvC out = u;
  out.coeffs() *= s;
  return out;
}
inline MvC operator*(Complex s, const MvC& u) { return u * s; }
inline MvC operator/(const MvC& u, Complex s) {
  MvC out = u;
  out.coeffs() /= s;
  return out;
}

// Basis 1-form dx^mu as a multivector.
template <typename S = double>
Multivector<S> basisForm(const ContextPtr& ctx, int mu) {
  return Multivector<S>::blade(ctx, 1u << mu);
}

}  // namespace tforge
