#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qudex/density.hpp"

namespace qudex {

struct ExtremalProblem {
  Matrix hamiltonian;
  GeneratorBasis basis;
  PurityConstants constants;
};

// degenerate_family marks a continuum of stationary states reported by one
// representative (maximally mixed constants, or H proportional to identity);
// finite multipliers do not exist there and the residual field carries the
// constraint mismatch only.
enum class SolutionClass { isolated, degenerate_family };

struct ExtremalSolution {
  Vector lambda_c;
  Vector multipliers;  // Lambda_2..Lambda_d; zero for degenerate_family
  double energy = 0.0;
  double residual = 0.0;  // compensated max-abs over the stationarity system
  double entropy = 0.0;
  SolutionClass classification = SolutionClass::isolated;
};

struct SolveOptions {
  std::uint64_t seed = 1;
  int start_budget = 0;  // 0 selects 200 * d
  bool verify = true;
};

struct SolveReport {
  std::vector<ExtremalSolution> solutions;  // energy ascending
  int expected_count = -1;  // from the target-spectrum symmetry structure
  int starts_used = 0;
  double best_residual = std::numeric_limits<double>::infinity();
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& msg, double best)
      : std::runtime_error(msg), best_residual(best) {}
  double best_residual;
};

// f = Tr(H rho) + sum_j Lambda_j (c_j - a_j).
double objective(const ExtremalProblem& p, const Vector& lambda,
                 const Vector& Lambda);

// Gradient of a_j over the coherence vector, 2 <= j <= d.
Vector constraint_gradient(const GeneratorBasis& basis, const Vector& lambda,
                           int j);

// Full stationarity system, d^2-1 gradient components followed by d-1
// constraint components, evaluated in compensated arithmetic.
Vector stationarity_residual(const ExtremalProblem& p, const Vector& lambda,
                             const Vector& Lambda);

// Closed-form qubit extremals: two branches for delta = sqrt(1-4c2) > 0,
// a single flagged I/2 solution at delta = 0 or for H proportional to I.
std::vector<ExtremalSolution> qubit_closed_form(const Matrix& H, double c2);

SolveReport solve_extremal(const ExtremalProblem& p, const SolveOptions& opts = {});

}  // namespace qudex
