#include "qudex/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qudex {

Matrix qubit_hamiltonian(double h0, double h1, double h2, double h3) {
  Matrix H(2, 2);
  H(0, 0) = Complex(0.5 * (h0 + h3), 0.0);
  H(0, 1) = Complex(0.5 * h1, -0.5 * h2);
  H(1, 0) = Complex(0.5 * h1, 0.5 * h2);
  H(1, 1) = Complex(0.5 * (h0 - h3), 0.0);
  return H;
}

SpinMatrices spin_matrices(double j) {
  double two_j = 2.0 * j;
  if (j < 0.5 || std::abs(two_j - std::round(two_j)) > 1e-12) {
    throw std::invalid_argument("spin must be a half-integer >= 1/2");
  }
  const int d = static_cast<int>(std::round(two_j)) + 1;
  if (d > 32) throw std::invalid_argument("spin representation too large");

  Matrix Jp = Matrix::Zero(d, d);  // raising operator on m-descending basis
  for (int i = 1; i < d; ++i) {
    double m = j - i;  // column state |j, m>
    Jp(i - 1, i) = Complex(std::sqrt(j * (j + 1) - m * (m + 1)), 0.0);
  }
  SpinMatrices s;
  s.Jx = (Jp + Jp.adjoint()) / 2.0;
  s.Jy = (Jp - Jp.adjoint()) / Complex(0.0, 2.0);
  s.Jz = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) s.Jz(i, i) = Complex(j - i, 0.0);
  return s;
}

Matrix bec_hamiltonian(const BecParams& p) {
  SpinMatrices s = spin_matrices(p.j);
  return p.a * s.Jz + p.b * s.Jz * s.Jz + p.c * s.Jx;
}

}  // namespace qudex
