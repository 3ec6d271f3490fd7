#pragma once

#include <array>

#include <Eigen/Dense>

#include "core/types.hpp"

namespace gc3b {

// A relabeling g of the three particles. Acting on particle-indexed data a,
// the relabeled tuple is a'_i = a_{g(i)}. Composition follows the left-action
// rule (g*h)(i) = h(g(i)), so that acting by h and then by g equals acting by
// g*h.
struct Permutation {
  std::array<int, 3> map{0, 1, 2};

  static Permutation identity() { return {}; }
  static Permutation transposition(int i, int j);
  static Permutation cycle();  // 1 -> 2 -> 3 -> 1 in 1-based labels

  // All six group elements in a fixed order:
  // id, (12), (13), (23), (123), (132).
  static const std::array<Permutation, 6>& group();

  Permutation compose(const Permutation& h) const;  // returns (*this) * h
  Permutation inverse() const;
  int parity() const;  // +1 for even, -1 for odd

  bool operator==(const Permutation& o) const { return map == o.map; }
};

template <typename T>
std::array<T, 3> apply_permutation(const Permutation& g, const std::array<T, 3>& a) {
  return {a[g.map[0]], a[g.map[1]], a[g.map[2]]};
}

// 3x3 matrix W with (W z)_i = z_{g(i)}.
Eigen::Matrix3d permutation_matrix(const Permutation& g);

// Orthogonal 2x2 action induced on the two relative (shape) modes by
// conjugating the permutation matrix with the orthonormal mode basis:
// the transposition (12) maps to diag(-1, 1) and the 3-cycle to the planar
// rotation by 2*pi/3.
Eigen::Matrix2d shape_block(const Permutation& g);

// SO(3) action induced on the Bloch vector: xi'_a = R_ab xi_b where
// R_ab = tr(B^T sigma_a B sigma_b)/2 for the shape block B.
Eigen::Matrix3d bloch_rotation(const Permutation& g);

}  // namespace gc3b
