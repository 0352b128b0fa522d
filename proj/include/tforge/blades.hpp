#pragma once

#include <bit>
#include <cstdint>

namespace tforge {

// Basis blades of the 16-dimensional algebra of forms are indexed by a 4-bit
// mask: bit m set means dx^m is a factor, factors ordered by increasing m.
inline constexpr int kBlades = 16;

inline int bladeGrade(unsigned b) { return std::popcount(b & 0xFu); }

struct SignedBlade {
  int sign;        // 0 means the result vanishes
  unsigned blade;
};

// dx^i-set wedge dx^j-set. Zero on overlap; otherwise the merge sign.
inline SignedBlade bladeWedge(unsigned i, unsigned j) {
  if (i & j) return {0, 0};
  int swaps = 0;
  for (int b = 0; b < 4; ++b) {
    if (j & (1u << b)) swaps += std::popcount(i >> (b + 1));
  }
  return {(swaps & 1) ? -1 : 1, i | j};
}

// Interior contraction iota_nu of a basis blade: removes dx^nu with the sign
// (-1)^{position of nu}. Zero when dx^nu is absent.
inline SignedBlade bladeContract(int nu, unsigned b) {
  unsigned bit = 1u << nu;
  if (!(b & bit)) return {0, 0};
  int below = std::popcount(b & (bit - 1u));
  return {(below & 1) ? -1 : 1, b & ~bit};
}

// Component of a totally antisymmetric blade coefficient with one index
// renamed: given canonical blade b containing alpha, the tuple with alpha
// replaced by lambda equals sign * (canonical blade). Zero if lambda collides
// with a remaining index.
inline SignedBlade bladeReplace(unsigned b, int alpha, int lambda) {
  unsigned rest = b & ~(1u << alpha);
  if (rest & (1u << lambda)) return {0, 0};
  if (lambda == alpha) return {1, b};
  int from = std::popcount(b & ((1u << alpha) - 1u));
  unsigned nb = rest | (1u << lambda);
  int to = std::popcount(nb & ((1u << lambda) - 1u));
  int dist = from - to;
  if (dist < 0) dist = -dist;
  return {(dist & 1) ? -1 : 1, nb};
}

// Sign of reversion on a pure grade-k element: (-1)^{k(k-1)/2}.
inline int reversionSign(int k) { return (k % 4 == 2 || k % 4 == 3) ? -1 : 1; }

}  // namespace tforge
