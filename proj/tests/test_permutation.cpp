#include <array>
#include <cmath>
#include <random>

#include "core/geometry.hpp"
#include "core/permutation.hpp"
#include "core/potential.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace gc3b;
using gc3b::testutil::random_state;

namespace {

std::array<Complex, 3> positions_of(const GuidingCenterState& s) {
  return {s.z(0), s.z(1), s.z(2)};
}

}  // namespace

TEST_CASE("group enumeration and composition") {
  const auto& g = Permutation::group();
  CHECK(g.size() == 6);
  CHECK(g[0] == Permutation::identity());
  CHECK(g[1] == Permutation::transposition(0, 1));
  // Every product of two elements is again in the list (closure), and the
  // matrix representation is a homomorphism.
  for (const auto& a : g) {
    for (const auto& b : g) {
      const auto c = a.compose(b);
      bool found = false;
      for (const auto& e : g) found = found || (e == c);
      CHECK(found);
      const Eigen::Matrix3d lhs = permutation_matrix(a) * permutation_matrix(b);
      CHECK((lhs - permutation_matrix(c)).norm() == 0.0);
    }
    CHECK(a.compose(a.inverse()) == Permutation::identity());
  }
}

TEST_CASE("parity splits the group into rotations and reflections") {
  const auto& g = Permutation::group();
  CHECK(g[0].parity() == 1);
  CHECK(g[1].parity() == -1);
  CHECK(g[2].parity() == -1);
  CHECK(g[3].parity() == -1);
  CHECK(g[4].parity() == 1);
  CHECK(g[5].parity() == 1);
}

TEST_CASE("relabeling acts by index lookup") {
  const std::array<int, 3> a{10, 20, 30};
  const auto swapped = apply_permutation(Permutation::transposition(0, 1), a);
  CHECK(swapped == std::array<int, 3>{20, 10, 30});
  const auto cycled = apply_permutation(Permutation::cycle(), a);
  // The 3-cycle maps 1 -> 2 -> 3 -> 1 in 1-based labels.
  bool forward = (cycled == std::array<int, 3>{20, 30, 10});
  bool backward = (cycled == std::array<int, 3>{30, 10, 20});
  CHECK(forward);
  CHECK_FALSE(backward);
}

TEST_CASE("shape blocks of the generators") {
  const Eigen::Matrix2d t = shape_block(Permutation::transposition(0, 1));
  CHECK(std::abs(t(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(t(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(t(0, 1)) < 1e-15);
  CHECK(std::abs(t(1, 0)) < 1e-15);

  const Eigen::Matrix2d c = shape_block(Permutation::cycle());
  CHECK(std::abs(c(0, 0) + 0.5) < 1e-14);
  CHECK(std::abs(c(1, 1) + 0.5) < 1e-14);
  CHECK(std::abs(c(0, 1) + std::sqrt(3.0) / 2.0) < 1e-14);
  CHECK(std::abs(c(1, 0) - std::sqrt(3.0) / 2.0) < 1e-14);
}

TEST_CASE("shape blocks form an orthogonal representation") {
  const auto& g = Permutation::group();
  for (const auto& a : g) {
    const Eigen::Matrix2d B = shape_block(a);
    CHECK((B.transpose() * B - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    CHECK(B.determinant() == doctest::Approx(a.parity()).epsilon(1e-14));
    for (const auto& b : g) {
      const Eigen::Matrix2d lhs = shape_block(a) * shape_block(b);
      CHECK((lhs - shape_block(a.compose(b))).norm() < 1e-14);
    }
  }
}

TEST_CASE("spinor transforms by the shape block under relabeling") {
  std::mt19937 eng(43);
  const auto& grp = Permutation::group();
  for (int it = 0; it < 10; ++it) {
    const auto s = random_state(eng);
    const auto z = positions_of(s);
    const auto psi = spinor_from_positions(z);
    for (const auto& g : grp) {
      const auto zg = apply_permutation(g, z);
      const auto psig = spinor_from_positions(zg);
      const Eigen::Matrix2d B = shape_block(g);
      const Complex want1 = B(0, 0) * psi.c1 + B(0, 1) * psi.c2;
      const Complex want2 = B(1, 0) * psi.c1 + B(1, 1) * psi.c2;
      CHECK(std::abs(psig.c1 - want1) < 1e-13);
      CHECK(std::abs(psig.c2 - want2) < 1e-13);
    }
  }
}

TEST_CASE("bloch rotation matches the induced shape-vector map") {
  std::mt19937 eng(47);
  const auto& grp = Permutation::group();
  for (const auto& g : grp) {
    const Eigen::Matrix3d R = bloch_rotation(g);
    CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() < 1e-13);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-13));
  }
  for (int it = 0; it < 10; ++it) {
    const auto s = random_state(eng);
    const auto z = positions_of(s);
    const auto p = bloch_from_spinor(spinor_from_positions(z));
    for (const auto& g : grp) {
      const auto pg =
          bloch_from_spinor(spinor_from_positions(apply_permutation(g, z)));
      CHECK((pg.xi() - bloch_rotation(g) * p.xi()).norm() < 1e-12);
      CHECK(pg.spin() == doctest::Approx(p.spin()).epsilon(1e-13));
    }
  }
}

TEST_CASE("squared sides permute like the particle labels") {
  std::mt19937 eng(53);
  const auto& grp = Permutation::group();
  for (int it = 0; it < 10; ++it) {
    const auto s = random_state(eng);
    const auto z = positions_of(s);
    const auto tri = triangle_from_shape(bloch_from_spinor(spinor_from_positions(z)));
    for (const auto& g : grp) {
      const auto trig = triangle_from_shape(
          bloch_from_spinor(spinor_from_positions(apply_permutation(g, z))));
      for (int k = 0; k < 3; ++k) {
        CHECK(trig.rho[k] == doctest::Approx(tri.rho[g.map[k]]).epsilon(1e-11));
      }
      // Relabeling flips the signed area exactly by the parity.
      CHECK(trig.area == doctest::Approx(g.parity() * tri.area).epsilon(1e-11));
    }
  }
}

TEST_CASE("pairwise interactions are relabeling invariant") {
  std::mt19937 eng(59);
  const auto pot = Potential::sum({{1.0, 2.0}, {0.4, 0.5}});
  for (int it = 0; it < 10; ++it) {
    const auto s = random_state(eng);
    const auto z = positions_of(s);
    const auto p = bloch_from_spinor(spinor_from_positions(z));
    const double v0 = pot.eval_shape(p);
    for (const auto& g : Permutation::group()) {
      const ShapePoint pg(p.spin(), bloch_rotation(g) * p.xi());
      CHECK(pot.eval_shape(pg) == doctest::Approx(v0).epsilon(1e-12));
    }
  }
}
