#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "core/permutation.hpp"
#include "core/potential.hpp"

namespace gc3b {

using CMatrix = Eigen::MatrixXcd;

// Spin-j matrices with j = (s-1)/2 in the two-mode number basis |n1, n2>,
// n1 + n2 = s - 1, ordered by n1 descending (third component diagonal,
// eigenvalues j, j-1, ..., -j).
std::array<CMatrix, 3> spin_matrices(int s);

// Squared-side operators rho_k = 2s I + 4 (sin(2 pi k/3) F1 + cos(2 pi k/3) F3).
std::array<CMatrix, 3> rho_operators(int s);

// Sector Hamiltonian: pairwise potentials via spectral calculus of each
// rho_k; declared polynomial potentials via fully symmetrized operator
// products in (S, F). Any other shape-function form is rejected
// (UnsupportedForm) — operator orderings are never guessed.
CMatrix build_hamiltonian(const Potential& pot, int s);

// Six unitaries representing the particle-relabeling group on the sector:
// the 2x2 shape block of each permutation lifted to the symmetric power on
// total quanta s - 1. Indexed in the order of Permutation::group().
std::array<CMatrix, 6> permutation_unitaries(int s);

struct SymmetryBlocks {
  std::array<CMatrix, 6> unitaries;
  CMatrix P_A1, P_A2, P_E;  // character projectors (trivial, sign, standard)
  int mult_A1 = 0, mult_A2 = 0, mult_E = 0;  // projector ranks; sum = s
  std::vector<double> spectrum_A1, spectrum_A2, spectrum_E;  // ascending
};

// Character-projector block decomposition of H. Raises NotSymmetric when H
// fails to commute with the representation (relative residual 1e-10).
SymmetryBlocks symmetry_blocks(const CMatrix& H,
                               const std::array<CMatrix, 6>& unitaries);

struct SpectrumLine {
  int l = 0;                // orbital label; raw operator eigenvalue is l + 1/2
  int s = 1;                // sector label (eigenvalue of the size operator)
  int n = 0;                // index within the sector, ascending energy
  double E_tilde = 0.0;     // sector eigenvalue
  double E = 0.0;           // E_tilde + omega_c (l + s)
  double L_eigenvalue = 0.5;  // l + 1/2
  std::string irrep;        // "A1", "A2", "E", or "-" when not symmetric
};

// Labelled eigenvalue table for s = 1..s_max, l = 0..l_max, sorted by
// (l, s, n). Within a degenerate cluster labels are emitted in the fixed
// order A1, A2, E.
std::vector<SpectrumLine> spectrum(const Potential& pot, int s_max,
                                   double omega_c, int l_max);

}  // namespace gc3b
