#pragma once

#include <vector>

#include "qudex/matrix.hpp"

namespace qudex {

// Ordered traceless Hermitian generator set with Tr(g_a g_b) = 2 delta_ab.
// Canonical order: symmetric off-diagonal pairs u_jk = E_jk + E_kj in
// lexicographic (j,k), then antisymmetric v_jk = -i(E_jk - E_kj) in the same
// order, then the d-1 diagonal generators
// w_l = sqrt(2/(l(l+1))) diag(1,...,1,-l,0,...). For d=2 this is the Pauli
// order (sigma_x, sigma_y, sigma_z).
struct GeneratorBasis {
  int dim = 0;
  std::vector<Matrix> generators;
  const char* ordering = "sym-asym-diag";
};

struct CoefficientForm {
  double h0 = 0.0;  // trace of the operator
  Vector coeffs;    // d^2 - 1 entries
};

GeneratorBasis build_basis(int d);

// h0 = Tr(M), coeffs[k] = Tr(M g_k).
CoefficientForm expand(const Matrix& M, const GeneratorBasis& basis);

// M = (h0/d) I + (1/2) sum_k coeffs[k] g_k. Exact inverse of expand.
Matrix reconstruct(const CoefficientForm& c, const GeneratorBasis& basis);

// Unit-trace Hermitian matrix from a coherence vector; positivity is not
// checked here.
Matrix bloch_to_density(const Vector& lambda, const GeneratorBasis& basis);

}  // namespace qudex
