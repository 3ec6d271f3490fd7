#include "core/potential.hpp"

#include <cmath>

namespace gc3b {

namespace {

constexpr double kRhoTiny = 1e-300;

// rho^lambda with fast paths for the common integer and half-integer cases.
double pow_rho(double rho, double lambda) {
  if (lambda == 0.0) return 1.0;
  if (lambda == 1.0) return rho;
  if (lambda == 2.0) return rho * rho;
  if (lambda == 3.0) return rho * rho * rho;
  if (lambda == 0.5) return std::sqrt(rho);
  if (lambda == -0.5) return 1.0 / std::sqrt(rho);
  if (lambda == -1.0) return 1.0 / rho;
  return std::pow(rho, lambda);
}

}  // namespace

Potential Potential::power(double g, double lambda) {
  return sum({PowerTerm{g, lambda}});
}

Potential Potential::sum(std::vector<PowerTerm> terms) {
  if (terms.empty()) {
    raise(ErrorCode::InvalidArgument, "pairwise potential needs at least one term");
  }
  for (const auto& t : terms) {
    if (!std::isfinite(t.g) || !std::isfinite(t.lambda)) {
      raise(ErrorCode::InvalidArgument, "pairwise term coefficients must be finite");
    }
  }
  Potential p;
  p.kind_ = Kind::Pairwise;
  p.terms_ = std::move(terms);
  return p;
}

Potential Potential::shape_function(ShapeFn eval, ShapeGradFn grad,
                                    std::optional<double> declared_homogeneity) {
  if (!eval) {
    raise(ErrorCode::InvalidArgument, "shape-function potential needs an evaluator");
  }
  Potential p;
  p.kind_ = Kind::ShapeFunction;
  p.fn_ = std::move(eval);
  p.grad_fn_ = std::move(grad);
  p.declared_homogeneity_ = declared_homogeneity;
  return p;
}

Potential Potential::polynomial(std::vector<PolyTerm> terms) {
  if (terms.empty()) {
    raise(ErrorCode::InvalidArgument, "polynomial potential needs at least one term");
  }
  for (const auto& t : terms) {
    if (t.s_power < 0 || t.f_exp[0] < 0 || t.f_exp[1] < 0 || t.f_exp[2] < 0) {
      raise(ErrorCode::InvalidArgument, "polynomial exponents must be nonnegative");
    }
    if (t.f_exp[0] + t.f_exp[1] + t.f_exp[2] > 12) {
      raise(ErrorCode::InvalidArgument, "polynomial operator degree too large");
    }
  }
  Potential p;
  p.kind_ = Kind::Polynomial;
  p.poly_ = std::move(terms);
  return p;
}

double Potential::eval_shape(const ShapePoint& p) const {
  const double s = p.spin();
  const Vec3& xi = p.xi();
  switch (kind_) {
    case Kind::Pairwise: {
      const TriangleGeometry tri = triangle_from_shape(p);
      CompensatedSum acc;
      for (const auto& t : terms_) {
        for (int k = 0; k < 3; ++k) {
          const double rho = tri.rho[k];
          if (t.lambda < 0.0 && rho < kRhoTiny) {
            raise(ErrorCode::SingularConfiguration,
                  "coincident pair with a divergent interaction term");
          }
          acc.add(t.g * pow_rho(rho, t.lambda));
        }
      }
      return acc.value();
    }
    case Kind::ShapeFunction:
      return fn_(s, xi);
    case Kind::Polynomial: {
      CompensatedSum acc;
      for (const auto& t : poly_) {
        double v = t.coeff * std::pow(s, t.s_power);
        for (int k = 0; k < 3; ++k) {
          const double fk = 0.5 * s * xi[k];
          for (int e = 0; e < t.f_exp[k]; ++e) v *= fk;
        }
        acc.add(v);
      }
      return acc.value();
    }
  }
  raise(ErrorCode::InvalidArgument, "unreachable potential kind");
}

ShapeGradient Potential::grad_shape(const ShapePoint& p) const {
  const double s = p.spin();
  const Vec3& xi = p.xi();
  ShapeGradient g;
  switch (kind_) {
    case Kind::Pairwise: {
      const auto& axes = side_axes();
      const TriangleGeometry tri = triangle_from_shape(p);
      CompensatedSum ds;
      Vec3 gx = Vec3::Zero();
      for (const auto& t : terms_) {
        for (int k = 0; k < 3; ++k) {
          const double rho = tri.rho[k];
          if (t.lambda < 1.0 && t.lambda != 0.0 && rho < kRhoTiny) {
            raise(ErrorCode::SingularConfiguration,
                  "interaction derivative divergent at a coincident pair");
          }
          // u'(rho) = g * lambda * rho^{lambda-1}
          const double du = t.g * t.lambda * pow_rho(rho, t.lambda - 1.0);
          ds.add(du * (rho / s));            // d rho_k / dS = rho_k / S
          gx += (2.0 * s * du) * axes[k];    // d rho_k / d xi = 2 S m_k
        }
      }
      g.dV_dS = ds.value();
      g.grad_xi = gx;
      return g;
    }
    case Kind::ShapeFunction: {
      if (grad_fn_) return grad_fn_(s, xi);
      // Central finite differences; xi displacements run along an orthonormal
      // tangent pair and are renormalized back onto the sphere, so the result
      // is automatically tangential.
      const double hs = 1e-6 * std::max(1.0, std::abs(s));
      const auto eval = [&](double sv, const Vec3& xv) { return fn_(sv, xv); };
      g.dV_dS = (eval(s + hs, xi) - eval(s - hs, xi)) / (2.0 * hs);
      const double hx = 1e-6;
      const Vec3 t1 = xi.unitOrthogonal();
      const Vec3 t2 = xi.cross(t1);
      const double g1 =
          (eval(s, (xi + hx * t1).normalized()) - eval(s, (xi - hx * t1).normalized())) /
          (2.0 * hx);
      const double g2 =
          (eval(s, (xi + hx * t2).normalized()) - eval(s, (xi - hx * t2).normalized())) /
          (2.0 * hx);
      g.grad_xi = g1 * t1 + g2 * t2;
      return g;
    }
    case Kind::Polynomial: {
      CompensatedSum ds;
      Vec3 gx = Vec3::Zero();
      for (const auto& t : poly_) {
        const int fdeg = t.f_exp[0] + t.f_exp[1] + t.f_exp[2];
        const int sdeg = t.s_power + fdeg;
        const double scale = t.coeff / std::pow(2.0, fdeg);
        double xprod = 1.0;
        for (int k = 0; k < 3; ++k)
          for (int e = 0; e < t.f_exp[k]; ++e) xprod *= xi[k];
        if (sdeg > 0) ds.add(scale * sdeg * std::pow(s, sdeg - 1) * xprod);
        const double spow = std::pow(s, sdeg);
        for (int k = 0; k < 3; ++k) {
          if (t.f_exp[k] == 0) continue;
          double dprod = t.f_exp[k];
          for (int j = 0; j < 3; ++j) {
            const int e = t.f_exp[j] - (j == k ? 1 : 0);
            for (int i = 0; i < e; ++i) dprod *= xi[j];
          }
          gx[k] += scale * spow * dprod;
        }
      }
      g.dV_dS = ds.value();
      g.grad_xi = gx;
      return g;
    }
  }
  raise(ErrorCode::InvalidArgument, "unreachable potential kind");
}

double Potential::eval_cartesian(const std::array<Eigen::Vector2d, 3>& q) const {
  if (kind_ != Kind::Pairwise) {
    raise(ErrorCode::UnsupportedForm,
          "Cartesian evaluation requires a pairwise potential");
  }
  CompensatedSum acc;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double rho = (q[i] - q[j]).squaredNorm();
      for (const auto& t : terms_) {
        if (t.lambda < 0.0 && rho < kRhoTiny) {
          raise(ErrorCode::SingularConfiguration,
                "coincident pair with a divergent interaction term");
        }
        acc.add(t.g * pow_rho(rho, t.lambda));
      }
    }
  }
  return acc.value();
}

std::array<Eigen::Vector2d, 3> Potential::grad_cartesian(
    const std::array<Eigen::Vector2d, 3>& q) const {
  if (kind_ != Kind::Pairwise) {
    raise(ErrorCode::UnsupportedForm,
          "Cartesian gradient requires a pairwise potential");
  }
  std::array<Eigen::Vector2d, 3> grad = {Eigen::Vector2d::Zero(),
                                         Eigen::Vector2d::Zero(),
                                         Eigen::Vector2d::Zero()};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Eigen::Vector2d d = q[i] - q[j];
      const double rho = d.squaredNorm();
      double du = 0.0;
      for (const auto& t : terms_) {
        if (t.lambda < 1.0 && t.lambda != 0.0 && rho < kRhoTiny) {
          raise(ErrorCode::SingularConfiguration,
                "interaction derivative divergent at a coincident pair");
        }
        du += t.g * t.lambda * pow_rho(rho, t.lambda - 1.0);
      }
      const Eigen::Vector2d f = 2.0 * du * d;  // d rho / d q_i = 2 (q_i - q_j)
      grad[i] += f;
      grad[j] -= f;
    }
  }
  return grad;
}

std::optional<double> Potential::homogeneity_degree() const {
  switch (kind_) {
    case Kind::Pairwise: {
      const double l0 = terms_.front().lambda;
      for (const auto& t : terms_) {
        if (t.lambda != l0) return std::nullopt;
      }
      return l0;
    }
    case Kind::ShapeFunction:
      return declared_homogeneity_;
    case Kind::Polynomial: {
      const auto deg = [](const PolyTerm& t) {
        return t.s_power + t.f_exp[0] + t.f_exp[1] + t.f_exp[2];
      };
      const int d0 = deg(poly_.front());
      for (const auto& t : poly_) {
        if (deg(t) != d0) return std::nullopt;
      }
      return static_cast<double>(d0);
    }
  }
  return std::nullopt;
}

bool Potential::has_singular_terms() const {
  for (const auto& t : terms_) {
    if (t.lambda < 0.0) return true;
  }
  return false;
}

Potential Potential::rescaled_couplings(double field_scale) const {
  if (kind_ != Kind::Pairwise) {
    raise(ErrorCode::UnsupportedForm, "coupling rescale requires a pairwise potential");
  }
  if (!(field_scale > 0.0)) {
    raise(ErrorCode::InvalidArgument, "field scale must be positive");
  }
  std::vector<PowerTerm> scaled = terms_;
  for (auto& t : scaled) t.g *= std::pow(field_scale, -t.lambda);
  return Potential::sum(std::move(scaled));
}

}  // namespace gc3b
