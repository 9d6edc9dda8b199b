#pragma once

namespace qudex {

// Centralized numeric tolerances. Solver and tests read these values; nothing
// redefines them locally.
struct NumericPolicy {
  double construction = 1e-12;    // hermiticity, basis orthogonality
  double reconstruction = 1e-10;  // eigendecomposition residual, round trips
  double solver = 1e-8;           // stationarity residual, constraint match
  double admissibility = 1e-10;   // allowed negativity of eigenvalues / char coefficients
  double dedup_lambda = 1e-6;     // coherence-vector distance treated as the same solution
  double dedup_energy = 1e-8;
  double tie_cluster = 1e-9;      // spectrum values closer than this are exact ties
  double newton_gap = 1e-4;       // smallest spectral gap the joint Newton engine accepts
  // Acceptance gate for rank-deficient branch reconstructions. A repeated or
  // vanishing target weight collapses the constraint gradients, so the branch
  // is certified on a split-weight state whose residual cannot fall below the
  // frame misalignment of a double-rounded matrix, about span * sqrt(d * eps).
  // The gate is this scale times deficient_gate; wrong-arrangement candidates
  // sit four orders higher, so the widened gate stays discriminating.
  double deficient_gate = 2.0;
};

inline constexpr NumericPolicy policy{};

}  // namespace qudex
