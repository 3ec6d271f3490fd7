#include "core/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "core/errors.hpp"

namespace gc3b {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_sector(int s) {
  if (s < 1) raise(ErrorCode::InvalidArgument, "sector label must be >= 1");
}

// Shared factor for lifting 2x2 orthogonal blocks to the sector: the
// eigendecomposition of F2, whose exponentials generate all planar mode
// rotations. Eigenvalues are snapped to their exact half-integer values.
struct LiftBasis {
  CMatrix V;
  Eigen::VectorXd m;
};

LiftBasis make_lift_basis(int s) {
  const auto F = spin_matrices(s);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(F[1]);
  LiftBasis b;
  b.V = es.eigenvectors();
  b.m.resize(s);
  for (int i = 0; i < s; ++i) {
    b.m(i) = 0.5 * std::llround(2.0 * es.eigenvalues()(i));
  }
  return b;
}

// Symmetric-power lift of a 2x2 orthogonal block O: the action of the mode
// substitution (x, y) -> (O11 x + O21 y, O12 x + O22 y) on normalized
// monomials x^{n1} y^{n2} / sqrt(n1! n2!), n1 descending. Functorial
// (lift(A) lift(B) = lift(A B)) and unitary. A rotation by alpha is
// exp(-2 i alpha F2) — the stable spectral form; the explicit binomial-sum
// matrix elements cancel catastrophically for large sectors. An improper
// block factors exactly through the reflection diag(-1, 1), whose lift is
// the diagonal (-1)^{n1}.
CMatrix symmetric_power_lift(const LiftBasis& basis, const Eigen::Matrix2d& O,
                             int s) {
  Eigen::Matrix2d R = O;
  const bool improper = O.determinant() < 0.0;
  if (improper) R.col(0) *= -1.0;  // R = O * diag(-1, 1)
  const double alpha = std::atan2(R(1, 0), R(0, 0));
  Eigen::VectorXcd phases(s);
  for (int i = 0; i < s; ++i) {
    phases(i) = std::exp(-2.0 * kI * alpha * basis.m(i));
  }
  CMatrix U = basis.V * phases.asDiagonal() * basis.V.adjoint();
  if (improper) {
    for (int r = 0; r < s; ++r) {
      if ((s - 1 - r) % 2 != 0) U.col(r) *= -1.0;
    }
  }
  return U;
}

// Fully symmetrized product over the multiset {F1^e1, F2^e2, F3^e3}:
// sym(e) = (1/n) sum_a e_a F_a sym(e - delta_a), memoized on the exponents.
const CMatrix& symmetrized_product(const std::array<CMatrix, 3>& F,
                                   std::array<int, 3> e,
                                   std::map<std::array<int, 3>, CMatrix>& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  const int n = e[0] + e[1] + e[2];
  const int dim = static_cast<int>(F[0].rows());
  CMatrix out;
  if (n == 0) {
    out = CMatrix::Identity(dim, dim);
  } else {
    out = CMatrix::Zero(dim, dim);
    for (int a = 0; a < 3; ++a) {
      if (e[a] == 0) continue;
      std::array<int, 3> rest = e;
      --rest[a];
      out += (static_cast<double>(e[a]) / n) * F[a] *
             symmetrized_product(F, rest, memo);
    }
  }
  return memo.emplace(e, std::move(out)).first->second;
}

double max_abs(const CMatrix& M) { return M.cwiseAbs().maxCoeff(); }

// S3 characters in the order of Permutation::group():
// id, (12), (13), (23), (123), (132).
constexpr std::array<double, 6> kCharTrivial{1, 1, 1, 1, 1, 1};
constexpr std::array<double, 6> kCharSign{1, -1, -1, -1, 1, 1};
constexpr std::array<double, 6> kCharStandard{2, 0, 0, 0, -1, -1};

CMatrix character_projector(const std::array<CMatrix, 6>& U,
                            const std::array<double, 6>& chi, double dim) {
  const auto n = U[0].rows();
  CMatrix P = CMatrix::Zero(n, n);
  for (int g = 0; g < 6; ++g) P += chi[g] * U[g].adjoint();
  return (dim / 6.0) * P;
}

// Orthonormal basis of the range of a Hermitian projector (eigenvectors with
// eigenvalue near 1), and the ascending spectrum of H restricted to it.
std::vector<double> block_eigenvalues(const CMatrix& P, const CMatrix& H,
                                      int rank) {
  if (rank == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(P);
  const auto n = P.rows();
  CMatrix W = es.eigenvectors().rightCols(rank);
  CMatrix Hb = W.adjoint() * H * W;
  Hb = Complex(0.5, 0.0) * (Hb + Hb.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eh(Hb);
  std::vector<double> out(rank);
  for (int i = 0; i < rank; ++i) out[i] = eh.eigenvalues()(i);
  (void)n;
  return out;
}

}  // namespace

std::array<CMatrix, 3> spin_matrices(int s) {
  require_sector(s);
  const double j = 0.5 * (s - 1);
  std::array<CMatrix, 3> F;
  for (auto& M : F) M = CMatrix::Zero(s, s);
  for (int r = 0; r < s; ++r) F[2](r, r) = j - r;
  for (int r = 1; r < s; ++r) {
    // Raising element between |n1+1, n2-1> and |n1, n2>, n1 = s-1-r.
    const double c = 0.5 * std::sqrt(static_cast<double>(r) * (s - r));
    F[0](r - 1, r) = c;
    F[0](r, r - 1) = c;
    F[1](r - 1, r) = -kI * c;
    F[1](r, r - 1) = kI * c;
  }
  return F;
}

std::array<CMatrix, 3> rho_operators(int s) {
  const auto F = spin_matrices(s);
  const CMatrix base = 2.0 * s * CMatrix::Identity(s, s);
  const double h = 0.5 * std::sqrt(3.0);
  std::array<CMatrix, 3> rho;
  rho[0] = base + 4.0 * (h * F[0] - 0.5 * F[2]);   // k = 1
  rho[1] = base + 4.0 * (-h * F[0] - 0.5 * F[2]);  // k = 2
  rho[2] = base + 4.0 * F[2];                      // k = 3
  return rho;
}

CMatrix build_hamiltonian(const Potential& pot, int s) {
  require_sector(s);
  switch (pot.kind()) {
    case Potential::Kind::Pairwise: {
      const auto rho = rho_operators(s);
      CMatrix H = CMatrix::Zero(s, s);
      for (const auto& R : rho) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
        Eigen::VectorXd w = es.eigenvalues();
        Eigen::VectorXd u = Eigen::VectorXd::Zero(s);
        for (const auto& t : pot.terms()) {
          for (int i = 0; i < s; ++i) {
            if (w(i) <= 0.0 && (t.lambda < 0.0 ||
                                (t.lambda != std::floor(t.lambda)))) {
              raise(ErrorCode::SingularOperator,
                    "interaction undefined on the squared-side spectrum");
            }
            u(i) += t.g * std::pow(w(i), t.lambda);
          }
        }
        H += es.eigenvectors() * u.asDiagonal() * es.eigenvectors().adjoint();
      }
      H = Complex(0.5, 0.0) * (H + H.adjoint());
      return H;
    }
    case Potential::Kind::Polynomial: {
      const auto F = spin_matrices(s);
      std::map<std::array<int, 3>, CMatrix> memo;
      CMatrix H = CMatrix::Zero(s, s);
      for (const auto& t : pot.poly_terms()) {
        const double c = t.coeff * std::pow(static_cast<double>(s), t.s_power);
        H += c * symmetrized_product(F, t.f_exp, memo);
      }
      H = Complex(0.5, 0.0) * (H + H.adjoint());
      return H;
    }
    case Potential::Kind::ShapeFunction:
      raise(ErrorCode::UnsupportedForm,
            "operator ordering undetermined for a generic shape function; "
            "use a pairwise or declared-polynomial form");
  }
  raise(ErrorCode::InvalidArgument, "unreachable potential kind");
}

std::array<CMatrix, 6> permutation_unitaries(int s) {
  require_sector(s);
  const LiftBasis basis = make_lift_basis(s);
  const auto& group = Permutation::group();
  std::array<CMatrix, 6> U;
  for (int g = 0; g < 6; ++g) {
    U[g] = symmetric_power_lift(basis, shape_block(group[g]), s);
  }
  return U;
}

SymmetryBlocks symmetry_blocks(const CMatrix& H,
                               const std::array<CMatrix, 6>& unitaries) {
  const auto n = H.rows();
  if (H.cols() != n || n < 1) {
    raise(ErrorCode::InvalidArgument, "Hamiltonian must be square");
  }
  const double h_scale = std::max(1.0, max_abs(H));
  for (const auto& U : unitaries) {
    if (U.rows() != n || U.cols() != n) {
      raise(ErrorCode::InvalidArgument, "unitary dimension mismatch");
    }
    if (max_abs(H * U - U * H) > 1e-10 * h_scale) {
      raise(ErrorCode::NotSymmetric,
            "Hamiltonian does not commute with the relabeling unitaries");
    }
  }
  SymmetryBlocks out;
  out.unitaries = unitaries;
  out.P_A1 = character_projector(unitaries, kCharTrivial, 1.0);
  out.P_A2 = character_projector(unitaries, kCharSign, 1.0);
  out.P_E = character_projector(unitaries, kCharStandard, 2.0);
  out.mult_A1 = static_cast<int>(std::lround(out.P_A1.trace().real()));
  out.mult_A2 = static_cast<int>(std::lround(out.P_A2.trace().real()));
  out.mult_E = static_cast<int>(std::lround(out.P_E.trace().real()));
  out.spectrum_A1 = block_eigenvalues(out.P_A1, H, out.mult_A1);
  out.spectrum_A2 = block_eigenvalues(out.P_A2, H, out.mult_A2);
  out.spectrum_E = block_eigenvalues(out.P_E, H, out.mult_E);
  return out;
}

std::vector<SpectrumLine> spectrum(const Potential& pot, int s_max,
                                   double omega_c, int l_max) {
  if (s_max < 1 || l_max < 0) {
    raise(ErrorCode::InvalidArgument, "need s_max >= 1 and l_max >= 0");
  }
  std::vector<SpectrumLine> table;
  for (int s = 1; s <= s_max; ++s) {
    const CMatrix H = build_hamiltonian(pot, s);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    const CMatrix& vec = es.eigenvectors();

    // Irrep labels: cluster degenerate eigenvalues, then count the irrep
    // content of each cluster from projector traces so labels stay stable
    // even when the solver mixes degenerate eigenvectors.
    std::vector<std::string> labels(s, "-");
    try {
      const auto U = permutation_unitaries(s);
      const SymmetryBlocks blocks = symmetry_blocks(H, U);
      const double tol =
          1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
      int i = 0;
      while (i < s) {
        int jend = i + 1;
        while (jend < s && ev(jend) - ev(jend - 1) <= tol) ++jend;
        const CMatrix W = vec.middleCols(i, jend - i);
        const auto count = [&](const CMatrix& P) {
          return static_cast<int>(
              std::lround((W.adjoint() * P * W).trace().real()));
        };
        int c1 = count(blocks.P_A1);
        int c2 = count(blocks.P_A2);
        int ce = count(blocks.P_E);
        for (int r = i; r < jend; ++r) {
          if (c1 > 0) {
            labels[r] = "A1";
            --c1;
          } else if (c2 > 0) {
            labels[r] = "A2";
            --c2;
          } else if (ce > 0) {
            labels[r] = "E";
            --ce;
          }
        }
        i = jend;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotSymmetric) throw;
    }

    for (int l = 0; l <= l_max; ++l) {
      for (int nn = 0; nn < s; ++nn) {
        SpectrumLine line;
        line.l = l;
        line.s = s;
        line.n = nn;
        line.E_tilde = ev(nn);
        line.E = ev(nn) + omega_c * (l + s);
        line.L_eigenvalue = l + 0.5;
        line.irrep = labels[nn];
        table.push_back(std::move(line));
      }
    }
  }
  std::sort(table.begin(), table.end(),
            [](const SpectrumLine& a, const SpectrumLine& b) {
              if (a.l != b.l) return a.l < b.l;
              if (a.s != b.s) return a.s < b.s;
              return a.n < b.n;
            });
  return table;
}

}  // namespace gc3b
