#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "tforge/multivector.hpp"

namespace tforge {

// Multivector-valued tensor with p upper and q lower slots: 4^(p+q) entries
// sharing one metric context. Slot order in every index list is upper slots
// first, then lower slots; storage is row-major over that order. Covariant
// differentiation prepends the new lower slot.
template <typename S>
class TensorForm {
 public:
  TensorForm() : p_(0), q_(0) {}
  TensorForm(ContextPtr ctx, int p, int q)
      : p_(p), q_(q), v_(pow4(p + q), Multivector<S>(ctx)), ctx_(std::move(ctx)) {}

  int upperCount() const { return p_; }
  int lowerCount() const { return q_; }
  int slotCount() const { return p_ + q_; }
  std::size_t size() const { return v_.size(); }
  const ContextPtr& context() const { return ctx_; }

  std::size_t flatIndex(std::initializer_list<int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * 4 + static_cast<std::size_t>(i);
    return f;
  }

  const Multivector<S>& at(std::initializer_list<int> idx) const { return v_[flatIndex(idx)]; }
  Multivector<S>& at(std::initializer_list<int> idx) { return v_[flatIndex(idx)]; }
  const Multivector<S>& flat(std::size_t i) const { return v_[i]; }
  Multivector<S>& flat(std::size_t i) { return v_[i]; }

  TensorForm& operator+=(const TensorForm& o) {
    requireSameShape(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  TensorForm& operator-=(const TensorForm& o) {
    requireSameShape(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  friend TensorForm operator+(TensorForm a, const TensorForm& b) { return a += b; }
  friend TensorForm operator-(TensorForm a, const TensorForm& b) { return a -= b; }

 private:
  static std::size_t pow4(int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= 4;
    return r;
  }
  void requireSameShape(const TensorForm& o) const {
    if (p_ != o.p_ || q_ != o.q_) throw AlgebraError("tensor shapes differ");
  }

  int p_, q_;
  std::vector<Multivector<S>> v_;
  ContextPtr ctx_;
};

template <typename S>
double maxAbs(const TensorForm<S>& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, maxAbs(t.flat(i)));
  return m;
}

template <typename S>
TensorForm<S> operator*(const TensorForm<S>& t, double s) {
  TensorForm<S> out = t;
  for (std::size_t i = 0; i < out.size(); ++i) out.flat(i) = out.flat(i) * s;
  return out;
}

}  // namespace tforge
