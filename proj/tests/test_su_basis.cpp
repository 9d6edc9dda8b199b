#include <cmath>

#include "doctest.h"
#include "qudex/random.hpp"
#include "qudex/su_basis.hpp"

using namespace qudex;

TEST_CASE("d=2 basis is the Pauli triple in order") {
  GeneratorBasis b = build_basis(2);
  REQUIRE(b.generators.size() == 3);
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  sz << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  CHECK((b.generators[0] - sx).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b.generators[1] - sy).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b.generators[2] - sz).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generator sets are traceless, Hermitian, trace-orthogonal") {
  for (int d = 2; d <= 6; ++d) {
    GeneratorBasis b = build_basis(d);
    const int m = d * d - 1;
    REQUIRE(static_cast<int>(b.generators.size()) == m);
    for (int a = 0; a < m; ++a) {
      const Matrix& g = b.generators[a];
      CHECK(std::abs(g.trace()) < 1e-14);
      CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
      for (int c = 0; c < m; ++c) {
        double expected = a == c ? 2.0 : 0.0;
        CHECK(std::abs(trace_product(g, b.generators[c]) - expected) < 1e-13);
      }
    }
  }
}

TEST_CASE("d=3 ordering: symmetric pairs, antisymmetric pairs, diagonals") {
  GeneratorBasis b = build_basis(3);
  // u_12 leads
  Matrix u12 = Matrix::Zero(3, 3);
  u12(0, 1) = u12(1, 0) = Complex(1, 0);
  CHECK((b.generators[0] - u12).cwiseAbs().maxCoeff() == 0.0);
  // v_12 follows the three symmetric generators
  Matrix v12 = Matrix::Zero(3, 3);
  v12(0, 1) = Complex(0, -1);
  v12(1, 0) = Complex(0, 1);
  CHECK((b.generators[3] - v12).cwiseAbs().maxCoeff() == 0.0);
  // diagonals close the list: diag(1,-1,0), diag(1,1,-2)/sqrt(3)
  Matrix w1 = Matrix::Zero(3, 3);
  w1(0, 0) = 1.0;
  w1(1, 1) = -1.0;
  CHECK((b.generators[6] - w1).cwiseAbs().maxCoeff() == 0.0);
  Matrix w2 = Matrix::Zero(3, 3);
  w2(0, 0) = w2(1, 1) = 1.0 / std::sqrt(3.0);
  w2(2, 2) = -2.0 / std::sqrt(3.0);
  CHECK((b.generators[7] - w2).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expand and reconstruct invert each other") {
  Rng rng(13);
  for (int d = 2; d <= 5; ++d) {
    GeneratorBasis b = build_basis(d);
    for (int rep = 0; rep < 10; ++rep) {
      Matrix M = random_hermitian(rng, d);
      CoefficientForm cf = expand(M, b);
      CHECK(cf.h0 == doctest::Approx(M.trace().real()).epsilon(1e-13));
      Matrix R = reconstruct(cf, b);
      CHECK((R - M).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("bloch_to_density pins the trace to one") {
  GeneratorBasis b = build_basis(3);
  Matrix id = bloch_to_density(Vector::Zero(8), b);
  CHECK((id - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-16);
  Vector lam(8);
  lam << 0.1, -0.2, 0.05, 0.3, 0.0, -0.1, 0.2, 0.1;
  Matrix rho = bloch_to_density(lam, b);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("unsupported dimensions are rejected") {
  CHECK_THROWS_AS(build_basis(1), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(40), std::invalid_argument);
}
