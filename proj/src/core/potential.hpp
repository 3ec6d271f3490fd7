#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "core/geometry.hpp"
#include "core/types.hpp"

namespace gc3b {

// Gradient of a shape-space potential V(S, xi): partial derivative in S at
// fixed xi, and the ambient xi-gradient at fixed S. Only the tangential part
// of grad_xi is physical; radial components are annihilated wherever the
// gradient enters an equation of motion.
struct ShapeGradient {
  double dV_dS = 0.0;
  Vec3 grad_xi = Vec3::Zero();
};

// One pairwise interaction term u(rho) = g * rho^lambda, where rho is the
// squared distance between a particle pair (u(r) = g r^{2 lambda} in terms of
// the distance r).
struct PowerTerm {
  double g;
  double lambda;
};

// Monomial of a declared polynomial potential:
//   coeff * S^{s_power} * prod_k F_k^{f_exp[k]}
// where classically F_k = (S/2) xi_k, and quantum-mechanically the product
// over the F_k is symmetrized over all operator orderings.
struct PolyTerm {
  double coeff;
  int s_power;
  std::array<int, 3> f_exp;
};

using ShapeFn = std::function<double(double S, const Vec3& xi)>;
using ShapeGradFn = std::function<ShapeGradient(double S, const Vec3& xi)>;

// Immutable interaction specification. Three kinds:
//   - pairwise: sum of PowerTerm interactions (has both a Cartesian and a
//     shape-space form; the backbone of everything in this project);
//   - shape_function: caller-supplied evaluator V(S, xi) with optional
//     analytic gradient (classical use only);
//   - polynomial: declared symmetrized polynomial in (S, F) usable both
//     classically and quantum-mechanically.
class Potential {
 public:
  enum class Kind { Pairwise, ShapeFunction, Polynomial };

  static Potential power(double g, double lambda);
  static Potential sum(std::vector<PowerTerm> terms);
  static Potential shape_function(ShapeFn eval, ShapeGradFn grad = nullptr,
                                  std::optional<double> declared_homogeneity = {});
  static Potential polynomial(std::vector<PolyTerm> terms);

  Kind kind() const { return kind_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  const std::vector<PolyTerm>& poly_terms() const { return poly_; }

  // V(S, xi). Throws SingularConfiguration if a negative-exponent term is
  // evaluated at a vanishing squared side.
  double eval_shape(const ShapePoint& p) const;

  // Analytic gradient for pairwise/polynomial kinds; for shape_function
  // potentials without a supplied gradient, falls back to central finite
  // differences (step 1e-6 * max(1, S)) with tangential projection of the
  // xi part. Throws SingularConfiguration when a pairwise term has a
  // divergent derivative at a collision (lambda < 1 at rho = 0).
  ShapeGradient grad_shape(const ShapePoint& p) const;

  // V as a function of planar positions, sum over pairs of u(|q_i - q_j|^2).
  // Only defined for the pairwise kind; throws UnsupportedForm otherwise.
  double eval_cartesian(const std::array<Eigen::Vector2d, 3>& q) const;

  // Gradient of eval_cartesian with respect to the six coordinates
  // (q[i] components); pairwise kind only.
  std::array<Eigen::Vector2d, 3> grad_cartesian(
      const std::array<Eigen::Vector2d, 3>& q) const;

  // Homogeneity degree lambda such that V(a S, xi) = a^lambda V(S, xi), when
  // the potential declares one (single power term, single-degree polynomial,
  // or a shape function constructed with a declared degree).
  std::optional<double> homogeneity_degree() const;

  // True if any term diverges at a two-particle collision (lambda < 0).
  bool has_singular_terms() const;

  // Pairwise potential with every term's coupling scaled by
  // field_scale^{-lambda_term}: the shape-space form evaluated on coordinates
  // scaled by sqrt(field_scale) then reproduces the original Cartesian
  // potential. Pairwise kind only.
  Potential rescaled_couplings(double field_scale) const;

 private:
  Potential() = default;

  Kind kind_ = Kind::Pairwise;
  std::vector<PowerTerm> terms_;
  std::vector<PolyTerm> poly_;
  ShapeFn fn_;
  ShapeGradFn grad_fn_;
  std::optional<double> declared_homogeneity_;
};

// Neumaier compensated summation, used for multi-term potential sums.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gc3b
