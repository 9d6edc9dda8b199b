#pragma once

#include <cstdint>
#include <random>

#include "qudex/matrix.hpp"

namespace qudex {

// Deterministic RNG. Raw mt19937_64 output is mapped by hand because the
// standard distributions are not bit-identical across library implementations
// and output files must be byte-stable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Matrix random_hermitian(Rng& rng, int d, double scale = 1.0) {
  Matrix M(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      M(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Matrix H = (M + M.adjoint()) / 2.0;
  return H * scale;
}

// QR of a complex Gaussian matrix with the R-diagonal phase fix.
inline Matrix haar_unitary(Rng& rng, int d) {
  Matrix Z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Z(i, j) = Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    Complex r = R(j, j);
    double a = std::abs(r);
    Q.col(j) *= (a > 1e-300) ? r / a : Complex(1.0, 0.0);
  }
  return Q;
}

// Random point on the probability simplex (normalized exponentials).
inline Vector random_simplex_spectrum(Rng& rng, int d) {
  Vector p(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    p(i) = -std::log(1.0 - rng.uniform());
    sum += p(i);
  }
  return p / sum;
}

inline Matrix random_admissible_density(Rng& rng, int d) {
  Vector p = random_simplex_spectrum(rng, d);
  Matrix U = haar_unitary(rng, d);
  Matrix rho = U * p.asDiagonal() * U.adjoint();
  return (rho + rho.adjoint()) / 2.0;
}

}  // namespace qudex
