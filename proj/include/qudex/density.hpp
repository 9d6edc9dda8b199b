#pragma once

#include <optional>
#include <vector>

#include "qudex/dd.hpp"
#include "qudex/su_basis.hpp"

namespace qudex {

struct BlochState {
  int dim = 0;
  Vector lambda;
};

// Target values c_2..c_d for the characteristic coefficients a_2..a_d.
struct PurityConstants {
  Vector c;  // c(0) = c_2, ..., c(d-2) = c_d
};

// [Tr rho, Tr rho^2, ..., Tr rho^{n_max}].
std::vector<double> purity_moments(const Matrix& rho, int n_max);

// a_2..a_d from the trace-power recursion; equals the elementary symmetric
// polynomials of the eigenvalues.
Vector char_coeffs(const Matrix& rho);

// Characteristic coefficients and their derivatives in Bloch coordinates.
// a(j) for j = 0..d; Da[j] is the gradient over the d^2-1 coordinates,
// D2a[j] the Hessian. order selects how much is filled (0, 1, or 2).
struct CharData {
  Vector a;
  std::vector<Vector> Da;
  std::vector<Eigen::MatrixXd> D2a;
};
CharData char_data(const GeneratorBasis& basis, const Vector& lambda, int order);

// Compensated (double-double) evaluation of a_j and the gradients, used for
// residual measurement below the plain-double noise floor.
struct CharDataDD {
  std::vector<DD> a;                // a[0..d]
  std::vector<std::vector<DD>> Da;  // Da[j][q], j = 0..d
};
CharDataDD char_data_dd(const GeneratorBasis& basis, const Vector& lambda);

// All a_j >= -policy.admissibility.
bool is_admissible(const Matrix& rho);

struct FeasibilityResult {
  bool feasible = false;
  BlochState witness;  // diagonal state carrying the solved spectrum
  Vector spectrum;     // descending eigenvalue targets, empty if infeasible
};

// Solves x^d - x^{d-1} + c_2 x^{d-2} - ... = 0 for a real nonnegative root
// multiset; feasible iff one exists. Throws std::invalid_argument on c_j < 0.
FeasibilityResult is_feasible(const PurityConstants& c, int d,
                              const GeneratorBasis& basis);

// Real roots of the monic polynomial with the given constants, ascending.
// Empty optional when the polynomial is not real-rooted.
std::optional<Vector> spectrum_from_constants(const PurityConstants& c, int d);

// S = -sum e_i ln e_i with 0 ln 0 := 0; eigenvalues in [-1e-10, 0) clamped.
// Throws std::domain_error below the admissibility floor.
double von_neumann_entropy(const Matrix& rho);

// Tr(rho ln rho - rho ln sigma). Returns +infinity when rho has weight on
// sigma's null space (sigma eigenvalue < 1e-12, rho projection > 1e-10).
double relative_entropy(const Matrix& rho, const Matrix& sigma);

}  // namespace qudex
