#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "qudex/policy.hpp"

namespace qudex {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, deterministic phase
};

// Throws std::invalid_argument carrying the max asymmetry when M deviates
// from Hermitian by more than tol.
void check_hermitian(const Matrix& M, double tol = policy.construction);

// Cyclic Jacobi diagonalization of a complex Hermitian matrix. Deterministic:
// fixed sweep order, ascending sort, each eigenvector's largest-magnitude
// component made real positive.
EigenDecomposition eigh(const Matrix& M);

// V f(diag) V^dagger through eigh. Hermitian output.
Matrix mat_fn(const Matrix& M, const std::function<double(double)>& f);

Matrix mat_exp(const Matrix& M);

// Requires all eigenvalues > tol; throws std::domain_error otherwise.
Matrix mat_log_strict(const Matrix& M, double tol = policy.construction);

// Tr(AB), returned as the real part; imaginary part is checked small when
// both inputs are Hermitian. Throws on dimension mismatch.
double trace_product(const Matrix& A, const Matrix& B);

}  // namespace qudex
