#include "qudex/inequalities.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qudex/density.hpp"

namespace qudex {

namespace {

void require_admissible(const Matrix& rho) {
  check_hermitian(rho);
  if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
    throw std::invalid_argument("state must have unit trace");
  }
  if (!is_admissible(rho)) {
    throw std::invalid_argument("state has a negative characteristic coefficient");
  }
}

// ln cosh(x), safe for large |x|.
double log_cosh(double x) {
  double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

Matrix gibbs_like(const Matrix& H) {
  check_hermitian(H);
  EigenDecomposition ed = eigh(H);
  const int d = static_cast<int>(H.rows());
  double shift = ed.eigenvalues.maxCoeff();
  double z = 0.0;
  Vector w(d);
  for (int i = 0; i < d; ++i) {
    w(i) = std::exp(ed.eigenvalues(i) - shift);
    z += w(i);
  }
  Matrix rho = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    rho += (w(i) / z) * ed.eigenvectors.col(i) * ed.eigenvectors.col(i).adjoint();
  }
  return (rho + rho.adjoint()) / 2.0;
}

double log_partition(const Matrix& H, double beta) {
  check_hermitian(H);
  EigenDecomposition ed = eigh(H);
  const int d = static_cast<int>(H.rows());
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) mx = std::max(mx, -beta * ed.eigenvalues(i));
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += std::exp(-beta * ed.eigenvalues(i) - mx);
  return mx + std::log(s);
}

double partition(const Matrix& H, double beta) {
  return std::exp(log_partition(H, beta));
}

std::pair<double, double> eq40_terms(const Matrix& rho, const Matrix& H) {
  check_hermitian(rho);
  check_hermitian(H);
  EigenDecomposition eh = eigh(H);
  const int d = static_cast<int>(H.rows());
  double z = 0.0, dz = 0.0;
  for (int i = 0; i < d; ++i) {
    double e = std::exp(eh.eigenvalues(i));
    z += e;
    dz += eh.eigenvalues(i) * e;
  }
  double lhs = dz - z * std::log(z);

  EigenDecomposition er = eigh(rho);
  if (er.eigenvalues.minCoeff() < 1e-12) {
    return {lhs, -std::numeric_limits<double>::infinity()};
  }
  Matrix expH = mat_exp(H);
  Matrix logRho = mat_fn(rho, [](double x) { return std::log(x); });
  return {lhs, trace_product(expH, logRho)};
}

InequalityReport check_bounds(const Matrix& rho, const Matrix& H) {
  require_admissible(rho);
  check_hermitian(H);
  InequalityReport r;
  r.energy = trace_product(rho, H);
  r.entropy = von_neumann_entropy(rho);
  r.bound = log_partition(H, -1.0);
  r.slack = r.bound - r.energy - r.entropy;
  r.diff_bound = log_partition(H, 1.0);
  r.diff_slack = r.diff_bound + r.energy - r.entropy;
  auto [lhs, rhs] = eq40_terms(rho, H);
  r.eq40_lhs = lhs;
  r.eq40_rhs = rhs;
  r.pass_sum = r.slack >= -1e-9;
  r.pass_diff = r.diff_slack >= -1e-9;
  r.pass_product = r.eq40_lhs >= r.eq40_rhs - 1e-9;
  r.passes = r.pass_sum && r.pass_diff && r.pass_product;
  return r;
}

double qubit_F_closed(double h, double delta) {
  if (h < 0.0) throw std::invalid_argument("field strength must be nonnegative");
  if (delta < 0.0 || delta >= 1.0) {
    throw std::domain_error("purity radius must lie in [0, 1)");
  }
  return 0.5 * (-delta * h + 2.0 * delta * std::atanh(delta) +
                2.0 * log_cosh(0.5 * h) + std::log1p(-delta * delta));
}

double observable_bound(const Matrix& rho, const Matrix& A) {
  require_admissible(rho);
  check_hermitian(A);
  return log_partition(A, -1.0) - trace_product(rho, A) - von_neumann_entropy(rho);
}

}  // namespace qudex
