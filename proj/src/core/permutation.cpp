#include "core/permutation.hpp"

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace gc3b {

Permutation Permutation::transposition(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2 || i == j) {
    raise(ErrorCode::InvalidArgument, "transposition needs two distinct labels in 0..2");
  }
  Permutation g;
  g.map[i] = j;
  g.map[j] = i;
  return g;
}

Permutation Permutation::cycle() {
  Permutation g;
  g.map = {1, 2, 0};
  return g;
}

const std::array<Permutation, 6>& Permutation::group() {
  static const std::array<Permutation, 6> elements = {
      Permutation::identity(),
      Permutation::transposition(0, 1),
      Permutation::transposition(0, 2),
      Permutation::transposition(1, 2),
      Permutation::cycle(),
      Permutation::cycle().compose(Permutation::cycle()),
  };
  return elements;
}

Permutation Permutation::compose(const Permutation& h) const {
  // (g*h)(i) = h(g(i))
  Permutation out;
  for (int i = 0; i < 3; ++i) out.map[i] = h.map[map[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  for (int i = 0; i < 3; ++i) out.map[map[i]] = i;
  return out;
}

int Permutation::parity() const {
  int p = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (map[i] > map[j]) p = -p;
  return p;
}

Eigen::Matrix3d permutation_matrix(const Permutation& g) {
  Eigen::Matrix3d w = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) w(i, g.map[i]) = 1.0;
  return w;
}

Eigen::Matrix2d shape_block(const Permutation& g) {
  const Eigen::Matrix3d o = mode_matrix();
  const Eigen::Matrix3d conj = o * permutation_matrix(g) * o.transpose();
  return conj.block<2, 2>(1, 1);
}

Eigen::Matrix3d bloch_rotation(const Permutation& g) {
  const Eigen::Matrix2d b = shape_block(g);
  const Complex i(0.0, 1.0);
  std::array<Eigen::Matrix2cd, 3> sigma;
  sigma[0] << 0, 1, 1, 0;
  sigma[1] << 0, -i, i, 0;
  sigma[2] << 1, 0, 0, -1;
  const Eigen::Matrix2cd bc = b.cast<Complex>();
  Eigen::Matrix3d r;
  for (int a = 0; a < 3; ++a) {
    const Eigen::Matrix2cd lifted = bc.adjoint() * sigma[a] * bc;
    for (int c = 0; c < 3; ++c) {
      r(a, c) = 0.5 * (lifted * sigma[c]).trace().real();
    }
  }
  return r;
}

}  // namespace gc3b
