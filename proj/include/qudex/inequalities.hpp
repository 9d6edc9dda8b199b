#pragma once

#include <utility>

#include "qudex/matrix.hpp"

namespace qudex {

struct InequalityReport {
  double energy = 0.0;      // Tr(rho H)
  double entropy = 0.0;     // S(rho)
  double bound = 0.0;       // ln Z(-1) = ln Tr e^H
  double slack = 0.0;       // bound - energy - entropy, >= 0
  double diff_bound = 0.0;  // ln Z(1) = ln Tr e^{-H}
  double diff_slack = 0.0;  // diff_bound + energy - entropy, >= 0
  double eq40_lhs = 0.0;    // Tr(H e^H) - Z(-1) ln Z(-1)
  double eq40_rhs = 0.0;    // Tr(e^H ln rho); -infinity when rho is singular
  bool pass_sum = false;
  bool pass_diff = false;
  bool pass_product = false;
  bool passes = false;  // conjunction of the three
};

// e^H / Tr e^H, stabilized by the max-eigenvalue shift.
Matrix gibbs_like(const Matrix& H);

// Z(beta) = Tr e^{-beta H}, evaluated through log-sum-exp.
double partition(const Matrix& H, double beta);

double log_partition(const Matrix& H, double beta);

// Full entropy-energy report for an admissible state against H.
InequalityReport check_bounds(const Matrix& rho, const Matrix& H);

// lhs = Tr(H e^H) - Z(-1) ln Z(-1), rhs = Tr(e^H ln rho); lhs >= rhs.
// Singular rho (eigenvalue < 1e-12) yields rhs = -infinity.
std::pair<double, double> eq40_terms(const Matrix& rho, const Matrix& H);

// F(h, delta) = (-delta h + 2 delta artanh(delta) + 2 ln cosh(h/2)
//               + ln(1 - delta^2)) / 2, the qubit slack on the higher-energy
// branch of a traceless field of strength h at purity radius delta.
double qubit_F_closed(double h, double delta);

// ln Tr e^A - Tr(rho A) - S(rho) >= 0 for any Hermitian observable A.
double observable_bound(const Matrix& rho, const Matrix& A);

}  // namespace qudex
