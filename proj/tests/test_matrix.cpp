#include <cmath>

#include "doctest.h"
#include "qudex/matrix.hpp"
#include "qudex/random.hpp"

using namespace qudex;

namespace {

double offdiag_norm(const Matrix& A) {
  double s = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (i != j) s += std::norm(A(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("eigh solves the Pauli-x matrix exactly") {
  Matrix sx(2, 2);
  sx << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  EigenDecomposition ed = eigh(sx);
  CHECK(ed.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ed.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
  // columns reassemble the input
  Matrix R = ed.eigenvectors * ed.eigenvalues.asDiagonal() *
             ed.eigenvectors.adjoint();
  CHECK((R - sx).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  Rng rng(7);
  for (int d = 2; d <= 6; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      Matrix H = random_hermitian(rng, d);
      EigenDecomposition ed = eigh(H);
      // ascending order
      for (int i = 0; i + 1 < d; ++i) {
        CHECK(ed.eigenvalues(i) <= ed.eigenvalues(i + 1));
      }
      Matrix VtV = ed.eigenvectors.adjoint() * ed.eigenvectors;
      CHECK((VtV - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-13);
      Matrix R = ed.eigenvectors * ed.eigenvalues.asDiagonal() *
                 ed.eigenvectors.adjoint();
      CHECK((R - H).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, H.norm()));
      // diagonalized residual
      Matrix D = ed.eigenvectors.adjoint() * H * ed.eigenvectors;
      CHECK(offdiag_norm(D) < 1e-12 * std::max(1.0, H.norm()));
    }
  }
}

TEST_CASE("eigh is deterministic") {
  Rng rng(11);
  Matrix H = random_hermitian(rng, 4);
  EigenDecomposition a = eigh(H);
  EigenDecomposition b = eigh(H);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eigh matches the closed-form qubit spectrum") {
  // H = (h0 I + h . sigma)/2 has eigenvalues (h0 -+ |h|)/2
  double h0 = 1.0, h1 = 0.4, h2 = -0.9, h3 = 0.25;
  Matrix H(2, 2);
  H << Complex(0.5 * (h0 + h3), 0), Complex(0.5 * h1, -0.5 * h2),
      Complex(0.5 * h1, 0.5 * h2), Complex(0.5 * (h0 - h3), 0);
  double h = std::sqrt(h1 * h1 + h2 * h2 + h3 * h3);
  EigenDecomposition ed = eigh(H);
  CHECK(ed.eigenvalues(0) == doctest::Approx((h0 - h) / 2).epsilon(1e-13));
  CHECK(ed.eigenvalues(1) == doctest::Approx((h0 + h) / 2).epsilon(1e-13));
}

TEST_CASE("check_hermitian rejects asymmetry") {
  Matrix M(2, 2);
  M << Complex(1, 0), Complex(0.5, 0.1), Complex(0.5, 0.1), Complex(2, 0);
  CHECK_THROWS_AS(check_hermitian(M), std::invalid_argument);
  M(1, 0) = std::conj(M(0, 1));
  CHECK_NOTHROW(check_hermitian(M));
}

TEST_CASE("matrix functions through the spectral decomposition") {
  Rng rng(3);
  Matrix H = random_hermitian(rng, 3, 0.3);

  Matrix E = mat_exp(Matrix::Zero(3, 3));
  CHECK((E - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  // log(exp(H)) = H for Hermitian H
  Matrix L = mat_log_strict(mat_exp(H));
  CHECK((L - H).cwiseAbs().maxCoeff() < 1e-11);

  // identity function returns the input
  Matrix F = mat_fn(H, [](double x) { return x; });
  CHECK((F - H).cwiseAbs().maxCoeff() < 1e-12);

  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(mat_log_strict(singular), std::domain_error);
}

TEST_CASE("trace_product equals the direct product trace") {
  Rng rng(5);
  Matrix A = random_hermitian(rng, 4);
  Matrix B = random_hermitian(rng, 4);
  double direct = (A * B).trace().real();
  CHECK(trace_product(A, B) == doctest::Approx(direct).epsilon(1e-13));
  Matrix C(3, 3);
  CHECK_THROWS_AS(trace_product(A, C), std::invalid_argument);
}
