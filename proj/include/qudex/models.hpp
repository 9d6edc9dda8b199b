#pragma once

#include "qudex/matrix.hpp"

namespace qudex {

// a: chemical-potential difference, b: atom-atom interaction, c: tunneling.
struct BecParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double j = 1.0;  // half-integer spin, d = 2j+1
};

// [[h0+h3, h1-i h2], [h1+i h2, h0-h3]] / 2 layout via the Pauli expansion.
Matrix qubit_hamiltonian(double h0, double h1, double h2, double h3);

struct SpinMatrices {
  Matrix Jx, Jy, Jz;
};

// Standard ladder construction on |j, m> with m descending, Jz = diag(j..-j).
SpinMatrices spin_matrices(double j);

// a Jz + b Jz^2 + c Jx.
Matrix bec_hamiltonian(const BecParams& p);

}  // namespace qudex
