#include "qudex/su_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qudex {

GeneratorBasis build_basis(int d) {
  if (d < 2) throw std::invalid_argument("build_basis: d must be >= 2");
  if (d > 32) throw std::invalid_argument("build_basis: d must be <= 32");

  GeneratorBasis basis;
  basis.dim = d;
  basis.generators.reserve(d * d - 1);

  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix u = Matrix::Zero(d, d);
      u(j, k) = Complex(1.0, 0.0);
      u(k, j) = Complex(1.0, 0.0);
      basis.generators.push_back(u);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix v = Matrix::Zero(d, d);
      v(j, k) = Complex(0.0, -1.0);
      v(k, j) = Complex(0.0, 1.0);
      basis.generators.push_back(v);
    }
  }
  for (int l = 1; l < d; ++l) {
    Matrix w = Matrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int i = 0; i < l; ++i) w(i, i) = Complex(norm, 0.0);
    w(l, l) = Complex(-norm * l, 0.0);
    basis.generators.push_back(w);
  }
  return basis;
}

CoefficientForm expand(const Matrix& M, const GeneratorBasis& basis) {
  if (M.rows() != basis.dim || M.cols() != basis.dim) {
    throw std::invalid_argument("expand: dimension mismatch");
  }
  CoefficientForm c;
  c.h0 = M.trace().real();
  const int m = static_cast<int>(basis.generators.size());
  c.coeffs = Vector(m);
  for (int k = 0; k < m; ++k) {
    c.coeffs(k) = trace_product(M, basis.generators[k]);
  }
  return c;
}

Matrix reconstruct(const CoefficientForm& c, const GeneratorBasis& basis) {
  const int d = basis.dim;
  if (c.coeffs.size() != static_cast<int>(basis.generators.size())) {
    throw std::invalid_argument("reconstruct: coefficient length mismatch");
  }
  Matrix M = (c.h0 / d) * Matrix::Identity(d, d);
  for (int k = 0; k < c.coeffs.size(); ++k) {
    M += 0.5 * c.coeffs(k) * basis.generators[k];
  }
  return M;
}

Matrix bloch_to_density(const Vector& lambda, const GeneratorBasis& basis) {
  CoefficientForm c;
  c.h0 = 1.0;
  c.coeffs = lambda;
  return reconstruct(c, basis);
}

}  // namespace qudex
