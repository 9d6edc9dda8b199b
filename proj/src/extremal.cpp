#include "qudex/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "qudex/random.hpp"

namespace qudex {

namespace {

// Exact-tie groups of a descending spectrum (gap <= tie_cluster).
std::vector<std::vector<int>> tie_groups(const Vector& spec, double tol) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < spec.size(); ++i) {
    if (groups.empty() || spec(groups.back().back()) - spec(i) > tol) {
      groups.push_back({i});
    } else {
      groups.back().push_back(i);
    }
  }
  return groups;
}

double multiset_permutations(const Vector& spec_desc, double tol) {
  double count = 1.0;
  for (int i = 2; i <= spec_desc.size(); ++i) count *= i;
  for (const auto& g : tie_groups(spec_desc, tol)) {
    for (int i = 2; i <= static_cast<int>(g.size()); ++i) count /= i;
  }
  return count;
}

struct ProblemData {
  const ExtremalProblem* prob = nullptr;
  int d = 0;
  int m = 0;   // d^2 - 1 coordinates
  int nc = 0;  // d - 1 constraints
  double h0 = 0.0;
  Vector h;        // generator coefficients of the Hamiltonian
  double hscale = 1.0;
  Vector target;   // descending target spectrum
};

double energy_of(const ProblemData& pd, const Vector& lambda) {
  DD e = DD(pd.h0) / DD(static_cast<double>(pd.d));
  for (int q = 0; q < pd.m; ++q) e = e + DD(0.5) * DD(pd.h(q)) * DD(lambda(q));
  return e.value();
}

// Compensated stationarity measurement; multipliers enter at double
// precision, which is exact for the system being measured.
struct Measured {
  double grad_res = 0.0;    // max |h_q/2 - sum Lambda_j da_j/dlambda_q|
  double constr_res = 0.0;  // max |c_j - a_j|
  double min_a = 0.0;       // admissibility witness
};

Measured measure(const ProblemData& pd, const CharDataDD& cd, const Vector& Lambda) {
  Measured out;
  for (int q = 0; q < pd.m; ++q) {
    DD f = DD(0.5) * DD(pd.h(q));
    for (int j = 2; j <= pd.d; ++j) f = f - DD(Lambda(j - 2)) * cd.Da[j][q];
    out.grad_res = std::max(out.grad_res, std::abs(f.value()));
  }
  out.min_a = 1.0;
  for (int j = 2; j <= pd.d; ++j) {
    DD gap = DD(pd.prob->constants.c(j - 2)) - cd.a[j];
    out.constr_res = std::max(out.constr_res, std::abs(gap.value()));
    out.min_a = std::min(out.min_a, cd.a[j].value());
  }
  return out;
}

Measured measure(const ProblemData& pd, const Vector& lambda, const Vector& Lambda) {
  return measure(pd, char_data_dd(pd.prob->basis, lambda), Lambda);
}

// Least-squares multipliers from the compensated gradient columns. The
// normal equations are formed and solved entirely in double-double: near a
// split degeneracy the smallest column scales with the split parameter and
// a plain-double assembly leaves nothing but rounding noise in it.
Vector multipliers_dd(const ProblemData& pd, const CharDataDD& cd) {
  const int n = pd.nc;
  // column norms for equilibration: near a deep multiplicity the columns
  // shrink like successive powers of the split parameter, and squaring
  // that scale spread in the normal equations would exhaust even DD
  std::vector<DD> scale(n, DD(0.0));
  for (int j = 0; j < n; ++j) {
    DD s2(0.0);
    for (int q = 0; q < pd.m; ++q) s2 = s2 + cd.Da[j + 2][q] * cd.Da[j + 2][q];
    double approx = std::sqrt(s2.value());
    if (approx == 0.0) return Vector::Zero(n);
    DD r(approx);  // one Newton step for a DD-accurate square root
    r = (r + s2 / r) * DD(0.5);
    scale[j] = r;
  }
  std::vector<std::vector<DD>> A(n, std::vector<DD>(n + 1, DD(0.0)));
  for (int q = 0; q < pd.m; ++q) {
    DD hq = DD(0.5) * DD(pd.h(q));
    for (int j = 0; j < n; ++j) {
      DD gj = cd.Da[j + 2][q] / scale[j];
      for (int k = 0; k <= j; ++k) {
        A[j][k] = A[j][k] + gj * (cd.Da[k + 2][q] / scale[k]);
      }
      A[j][n] = A[j][n] + gj * hq;
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) A[j][k] = A[k][j];
  }
  for (int col = 0; col < n; ++col) {
    int best = col;
    for (int r = col + 1; r < n; ++r) {
      if (dd_less(dd_abs(A[best][col]), dd_abs(A[r][col]))) best = r;
    }
    std::swap(A[col], A[best]);
    if (dd_abs(A[col][col]).value() == 0.0) return Vector::Zero(n);
    for (int r = col + 1; r < n; ++r) {
      DD f = A[r][col] / A[col][col];
      for (int k = col; k <= n; ++k) A[r][k] = A[r][k] - f * A[col][k];
    }
  }
  std::vector<DD> y(n);
  for (int col = n - 1; col >= 0; --col) {
    DD s = A[col][n];
    for (int k = col + 1; k < n; ++k) s = s - A[col][k] * y[k];
    y[col] = s / A[col][col];
  }
  Vector out(n);
  for (int j = 0; j < n; ++j) out(j) = (y[j] / scale[j]).value();
  return out;
}

// ---------------------------------------------------------------------------
// Regular engine: damped Newton on the joint (lambda, Lambda) system.

struct NewtonOutcome {
  bool ok = false;
  Vector lambda, Lambda;
};

Eigen::VectorXd joint_residual(const ProblemData& pd, const CharData& cd,
                               const Vector& lambda, const Vector& Lambda) {
  Eigen::VectorXd R(pd.m + pd.nc);
  for (int q = 0; q < pd.m; ++q) {
    double f = 0.5 * pd.h(q);
    for (int j = 2; j <= pd.d; ++j) f -= Lambda(j - 2) * cd.Da[j](q);
    R(q) = f;
  }
  for (int j = 2; j <= pd.d; ++j) {
    R(pd.m + j - 2) = pd.prob->constants.c(j - 2) - cd.a(j);
  }
  return R;
}

NewtonOutcome newton_joint(const ProblemData& pd, Vector lambda, Vector Lambda) {
  const int n = pd.m + pd.nc;
  const double tol = 1e-11 * std::max(1.0, pd.hscale);
  for (int iter = 0; iter < 80; ++iter) {
    CharData cd = char_data(pd.prob->basis, lambda, 2);
    Eigen::VectorXd R = joint_residual(pd, cd, lambda, Lambda);
    double rmax = R.cwiseAbs().maxCoeff();
    if (rmax < tol) return {true, lambda, Lambda};

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int j = 2; j <= pd.d; ++j) {
      J.topLeftCorner(pd.m, pd.m) -= Lambda(j - 2) * cd.D2a[j];
      J.block(0, pd.m + j - 2, pd.m, 1) = -cd.Da[j];
      J.block(pd.m + j - 2, 0, 1, pd.m) = -cd.Da[j].transpose();
    }
    Eigen::VectorXd step = J.partialPivLu().solve(-R);
    if (!step.allFinite()) return {};

    double phi0 = R.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      Vector lt = lambda + t * step.head(pd.m);
      Vector Lt = Lambda + t * step.tail(pd.nc);
      if (lt.cwiseAbs().maxCoeff() > 10.0) continue;
      CharData ct = char_data(pd.prob->basis, lt, 1);
      double phi1 = joint_residual(pd, ct, lt, Lt).squaredNorm();
      if (phi1 <= (1.0 - 1e-4 * t) * phi0) {
        lambda = lt;
        Lambda = Lt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return {};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Degenerate engine: Gauss-Newton on the commutator plus the spectral
// polynomial over the distinct-level cluster means. Full rank at solutions
// even where the constraint gradients collapse.

void herm_comps(const Matrix& M, double* out) {
  const int d = static_cast<int>(M.rows());
  int k = 0;
  for (int i = 0; i < d; ++i) out[k++] = M(i, i).real();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      out[k++] = M(i, j).real();
      out[k++] = M(i, j).imag();
    }
  }
}

struct Cluster {
  double mean = 0.0;
  std::vector<double> values;  // true targets, descending
};

struct GnSystem {
  const ProblemData* pd = nullptr;
  std::vector<Cluster> clusters;       // descending means
  std::vector<Matrix> dcomm;           // i [H, g_k] / 2, constant in lambda
  double spread = 0.0;                 // max in-cluster deviation
  double tol = 0.0;

  Eigen::VectorXd residual(const Matrix& rho) const {
    const int d = pd->d;
    const Matrix& H = pd->prob->hamiltonian;
    Matrix comm = Complex(0.0, 1.0) * (H * rho - rho * H);
    Matrix Q = Matrix::Identity(d, d);
    for (const auto& c : clusters) Q = Q * (rho - c.mean * Matrix::Identity(d, d));
    Eigen::VectorXd r(2 * d * d);
    herm_comps(comm, r.data());
    herm_comps(Q, r.data() + d * d);
    return r;
  }

  Eigen::MatrixXd jacobian(const Matrix& rho) const {
    const int d = pd->d;
    const int m = pd->m;
    const int K = static_cast<int>(clusters.size());
    std::vector<Matrix> factor(K), prefix(K), suffix(K);
    for (int a = 0; a < K; ++a) {
      factor[a] = rho - clusters[a].mean * Matrix::Identity(d, d);
    }
    prefix[0] = Matrix::Identity(d, d);
    for (int a = 1; a < K; ++a) prefix[a] = prefix[a - 1] * factor[a - 1];
    suffix[K - 1] = Matrix::Identity(d, d);
    for (int a = K - 2; a >= 0; --a) suffix[a] = factor[a + 1] * suffix[a + 1];

    Eigen::MatrixXd J(2 * d * d, m);
    for (int k = 0; k < m; ++k) {
      const Matrix& g = pd->prob->basis.generators[k];
      Matrix dQ = Matrix::Zero(d, d);
      for (int a = 0; a < K; ++a) dQ += prefix[a] * (0.5 * g) * suffix[a];
      Eigen::VectorXd col(2 * d * d);
      herm_comps(dcomm[k], col.data());
      herm_comps(dQ, col.data() + d * d);
      J.col(k) = col;
    }
    return J;
  }
};

std::optional<Vector> gn_solve(const GnSystem& sys, Vector lambda) {
  const ProblemData& pd = *sys.pd;
  Matrix rho = bloch_to_density(lambda, pd.prob->basis);
  Eigen::VectorXd r = sys.residual(rho);
  double phi = r.squaredNorm();
  double mu = 1e-4;
  for (int iter = 0; iter < 150; ++iter) {
    if (r.cwiseAbs().maxCoeff() <= sys.tol) return lambda;
    Eigen::MatrixXd J = sys.jacobian(rho);
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd Ad = A;
      Ad.diagonal().array() += mu;
      Eigen::VectorXd step = Ad.ldlt().solve(-g);
      if (step.allFinite()) {
        Vector lt = lambda + step;
        Matrix rt = bloch_to_density(lt, pd.prob->basis);
        Eigen::VectorXd r1 = sys.residual(rt);
        double phi1 = r1.squaredNorm();
        if (phi1 < phi) {
          lambda = lt;
          rho = rt;
          r = r1;
          phi = phi1;
          mu = std::max(mu / 3.0, 1e-14);
          accepted = true;
          break;
        }
      }
      mu *= 4.0;
      if (mu > 1e13) break;
    }
    if (!accepted) break;
  }
  if (r.cwiseAbs().maxCoeff() <= sys.tol) return lambda;
  return std::nullopt;
}

// Modified Gram-Schmidt, two passes; machine-exact orthonormality keeps the
// recovered frame equivalent to a benign Hamiltonian perturbation instead of
// feeding multiplier-amplified junk into the residual.
void orthonormalize(Matrix& V) {
  const int d = static_cast<int>(V.rows());
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < j; ++i) {
        Complex c = V.col(i).dot(V.col(j));
        V.col(j) -= c * V.col(i);
      }
      V.col(j) /= V.col(j).norm();
    }
  }
}

struct FrameSlot {
  Matrix proj;       // rank-one projector
  double energy;     // Tr(H proj)
  double weight;     // Tr(rho_branch proj)
};

struct Candidate {
  Vector lambda;
  Vector Lambda;
  std::vector<double> q;
  double merit = std::numeric_limits<double>::infinity();
  double target_energy = 0.0;  // energy at the exact target weights
  Measured meas;
};

// Weighted sum over an orthonormal frame with per-slot weights q.
Matrix assemble(const std::vector<FrameSlot>& slots, const std::vector<double>& q) {
  const int d = static_cast<int>(slots[0].proj.rows());
  Matrix rho = Matrix::Zero(d, d);
  for (size_t i = 0; i < slots.size(); ++i) rho += q[i] * slots[i].proj;
  return (rho + rho.adjoint()) / 2.0;
}

Vector lstsq_multipliers(const ProblemData& pd, const Vector& lambda) {
  CharData cd = char_data(pd.prob->basis, lambda, 1);
  Eigen::MatrixXd G(pd.m, pd.nc);
  for (int j = 2; j <= pd.d; ++j) G.col(j - 2) = cd.Da[j];
  return G.colPivHouseholderQr().solve(0.5 * pd.h);
}

// Build and score one weight assignment, scanning the split parameter when
// exact ties must be resolved into a nearby nondegenerate state.
Candidate construct_candidate(const ProblemData& pd,
                              const std::vector<FrameSlot>& slots,
                              const std::vector<double>& q0) {
  const int d = pd.d;
  std::vector<std::vector<int>> ties;  // index groups sharing a value
  {
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return q0[a] > q0[b]; });
    for (int i : order) {
      if (!ties.empty() && std::abs(q0[ties.back().back()] - q0[i]) <= policy.tie_cluster) {
        ties.back().push_back(i);
      } else {
        ties.push_back({i});
      }
    }
  }
  bool has_tie = false;
  for (const auto& g : ties) has_tie |= g.size() > 1;

  std::vector<double> svals;
  if (!has_tie) {
    svals.push_back(0.0);
  } else {
    // ~30 rounding realizations across the representation-limit window
    for (int i = 0; i < 30; ++i) {
      svals.push_back(5e-10 * std::pow(2.5e-8 / 5e-10, i / 29.0));
    }
  }

  Candidate best;
  for (double s : svals) {
    std::vector<double> q = q0;
    double added = 0.0;
    for (const auto& g : ties) {
      if (g.size() < 2) continue;
      const int tau = static_cast<int>(g.size());
      if (q0[g.front()] <= 1e-6) {
        // near-zero class: one-sided offsets keep the weights nonnegative
        for (int j = 0; j < tau; ++j) {
          q[g[j]] += j * s;
          added += j * s;
        }
      } else {
        for (int j = 0; j < tau; ++j) q[g[j]] += (j - (tau - 1) * 0.5) * s;
      }
    }
    if (added != 0.0) {
      // spread the compensation uniformly over the non-tiny slots so the
      // mutual gaps created above survive
      int n_nz = 0;
      for (int i = 0; i < d; ++i) n_nz += q0[i] > 1e-6 ? 1 : 0;
      for (int i = 0; i < d; ++i) {
        if (q0[i] > 1e-6) q[i] -= added / n_nz;
      }
    }

    Matrix rho = assemble(slots, q);
    CoefficientForm cf = expand(rho, pd.prob->basis);
    Vector lambda = cf.coeffs;
    CharDataDD cd = char_data_dd(pd.prob->basis, lambda);
    Vector Lambda = multipliers_dd(pd, cd);
    Measured ms = measure(pd, cd, Lambda);
    double de = 0.0;
    for (int i = 0; i < d; ++i) de += (q[i] - q0[i]) * slots[i].energy;
    double merit = std::max({ms.grad_res, ms.constr_res, std::abs(de)});
    if (merit < best.merit) {
      best.lambda = lambda;
      best.Lambda = Lambda;
      best.q = q;
      best.merit = merit;
      best.meas = ms;
    }
  }
  for (int i = 0; i < d; ++i) best.target_energy += q0[i] * slots[i].energy;
  return best;
}

double entropy_of_weights(const std::vector<double>& q) {
  double s = 0.0;
  for (double w : q) {
    if (w > 1e-300) s -= w * std::log(w);
  }
  return std::max(s, 0.0);
}

// ---------------------------------------------------------------------------

void sort_and_label(std::vector<ExtremalSolution>& sols) {
  std::sort(sols.begin(), sols.end(),
            [](const ExtremalSolution& a, const ExtremalSolution& b) {
              if (a.energy != b.energy) return a.energy < b.energy;
              for (int q = 0; q < a.lambda_c.size(); ++q) {
                if (a.lambda_c(q) != b.lambda_c(q)) return a.lambda_c(q) < b.lambda_c(q);
              }
              return false;
            });
}

bool same_solution(const ProblemData& pd, const ExtremalSolution& a,
                   const ExtremalSolution& b) {
  double dl = (a.lambda_c - b.lambda_c).cwiseAbs().maxCoeff();
  if (dl <= policy.dedup_lambda) return true;
  if (std::abs(a.energy - b.energy) > policy.dedup_energy) return false;
  Matrix ra = bloch_to_density(a.lambda_c, pd.prob->basis);
  Matrix rb = bloch_to_density(b.lambda_c, pd.prob->basis);
  return (ra - rb).cwiseAbs().maxCoeff() <= policy.dedup_lambda;
}

ExtremalSolution family_solution(const ProblemData& pd, const Vector& lambda) {
  ExtremalSolution s;
  s.lambda_c = lambda;
  s.multipliers = Vector::Zero(pd.nc);
  s.energy = energy_of(pd, lambda);
  Measured ms = measure(pd, lambda, Vector::Zero(pd.nc));
  s.residual = ms.constr_res;  // no finite multipliers exist on a family
  Matrix rho = bloch_to_density(lambda, pd.prob->basis);
  s.entropy = von_neumann_entropy(rho);
  s.classification = SolutionClass::degenerate_family;
  return s;
}

}  // namespace

double objective(const ExtremalProblem& p, const Vector& lambda,
                 const Vector& Lambda) {
  const int d = p.basis.dim;
  CoefficientForm hf = expand(p.hamiltonian, p.basis);
  double f = hf.h0 / d + 0.5 * hf.coeffs.dot(lambda);
  CharData cd = char_data(p.basis, lambda, 0);
  for (int j = 2; j <= d; ++j) f += Lambda(j - 2) * (p.constants.c(j - 2) - cd.a(j));
  return f;
}

Vector constraint_gradient(const GeneratorBasis& basis, const Vector& lambda,
                           int j) {
  if (j < 2 || j > basis.dim) {
    throw std::invalid_argument("constraint index must lie in [2, d]");
  }
  return char_data(basis, lambda, 1).Da[j];
}

Vector stationarity_residual(const ExtremalProblem& p, const Vector& lambda,
                             const Vector& Lambda) {
  const int d = p.basis.dim;
  const int m = d * d - 1;
  CoefficientForm hf = expand(p.hamiltonian, p.basis);
  CharDataDD cd = char_data_dd(p.basis, lambda);
  Vector out(m + d - 1);
  for (int q = 0; q < m; ++q) {
    DD f = DD(0.5) * DD(hf.coeffs(q));
    for (int j = 2; j <= d; ++j) f = f - DD(Lambda(j - 2)) * cd.Da[j][q];
    out(q) = f.value();
  }
  for (int j = 2; j <= d; ++j) {
    out(m + j - 2) = (DD(p.constants.c(j - 2)) - cd.a[j]).value();
  }
  return out;
}

std::vector<ExtremalSolution> qubit_closed_form(const Matrix& H, double c2) {
  check_hermitian(H);
  if (H.rows() != 2) throw std::invalid_argument("qubit form needs a 2x2 H");
  if (c2 < -1e-12 || c2 > 0.25 + 1e-12) {
    throw std::invalid_argument("qubit purity constant must lie in [0, 1/4]");
  }
  c2 = std::min(std::max(c2, 0.0), 0.25);
  GeneratorBasis basis = build_basis(2);
  CoefficientForm hf = expand(H, basis);
  const double h0 = hf.h0;
  const double h = hf.coeffs.norm();
  const double delta = std::sqrt(std::max(0.0, 1.0 - 4.0 * c2));
  ExtremalProblem prob{H, basis, PurityConstants{Vector::Constant(1, c2)}};
  ProblemData pd{&prob, 2, 3, 1, h0, hf.coeffs,
                 std::max(1.0, hf.coeffs.cwiseAbs().maxCoeff()),
                 Vector()};

  std::vector<ExtremalSolution> out;
  if (h <= 1e-12 || delta <= 1e-12) {
    // H proportional to I, or maximally mixed target: a flat family
    out.push_back(family_solution(pd, Vector::Zero(3)));
    return out;
  }
  for (int sign : {-1, +1}) {
    ExtremalSolution s;
    s.lambda_c = sign * (delta / h) * hf.coeffs;
    s.multipliers = Vector::Constant(1, -sign * h / delta);
    s.energy = (h0 + sign * delta * h) / 2.0;
    Measured ms = measure(pd, s.lambda_c, s.multipliers);
    s.residual = std::max(ms.grad_res, ms.constr_res);
    std::vector<double> q{(1.0 + delta) / 2.0, (1.0 - delta) / 2.0};
    s.entropy = entropy_of_weights(q);
    s.classification = SolutionClass::isolated;
    out.push_back(s);
  }
  sort_and_label(out);
  return out;
}

SolveReport solve_extremal(const ExtremalProblem& p, const SolveOptions& opts) {
  check_hermitian(p.hamiltonian);
  const int d = p.basis.dim;
  if (d < 2 || p.hamiltonian.rows() != d) {
    throw std::invalid_argument("basis dimension does not match the Hamiltonian");
  }
  if (p.constants.c.size() != d - 1) {
    throw std::invalid_argument("expected d-1 purity constants");
  }
  FeasibilityResult feas = is_feasible(p.constants, d, p.basis);
  if (!feas.feasible) {
    throw std::invalid_argument("purity constants admit no density matrix");
  }

  CoefficientForm hf = expand(p.hamiltonian, p.basis);
  ProblemData pd{&p, d, d * d - 1, d - 1, hf.h0, hf.coeffs,
                 std::max(1.0, hf.coeffs.cwiseAbs().maxCoeff()), feas.spectrum};

  SolveReport report;
  report.expected_count =
      static_cast<int>(multiset_permutations(pd.target, policy.tie_cluster) + 0.5);

  const double spread = pd.target(0) - pd.target(d - 1);
  const bool h_flat = hf.coeffs.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, std::abs(hf.h0));

  // Flat objective or flat target spectrum: continuum of stationary states,
  // reported through a single flagged representative.
  if (h_flat) {
    report.solutions.push_back(family_solution(pd, feas.witness.lambda));
    report.expected_count = 1;
    report.best_residual = report.solutions[0].residual;
    return report;
  }
  if (spread <= policy.tie_cluster) {
    report.solutions.push_back(family_solution(pd, Vector::Zero(pd.m)));
    report.expected_count = 1;
    report.best_residual = report.solutions[0].residual;
    return report;
  }

  double gap_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < d; ++i) {
    gap_min = std::min(gap_min, pd.target(i) - pd.target(i + 1));
  }

  if (d == 2 && gap_min <= policy.newton_gap) {
    // delta small enough that the joint system is ill-conditioned; the
    // closed form is exact there.
    report.solutions = qubit_closed_form(p.hamiltonian, p.constants.c(0));
    report.best_residual = 0.0;
    for (const auto& s : report.solutions) {
      report.best_residual = std::max(report.best_residual, s.residual);
    }
    sort_and_label(report.solutions);
    return report;
  }

  const int budget = opts.start_budget > 0 ? opts.start_budget : 200 * d;
  Rng rng(opts.seed);
  std::vector<ExtremalSolution> accepted;
  double best_attempt = std::numeric_limits<double>::infinity();

  auto try_accept = [&](ExtremalSolution&& s, const Measured& ms, double gate) {
    double res = std::max(ms.grad_res, ms.constr_res);
    best_attempt = std::min(best_attempt, res);
    if (opts.verify) {
      if (res > gate) return;
      if (ms.min_a < -policy.admissibility) return;
    }
    s.residual = res;
    for (const auto& e : accepted) {
      if (same_solution(pd, e, s)) return;
    }
    accepted.push_back(std::move(s));
  };

  auto random_start = [&]() {
    std::vector<double> vals(pd.target.data(), pd.target.data() + d);
    for (int i = d - 1; i > 0; --i) {
      int j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(vals[i], vals[j]);
    }
    Matrix U = haar_unitary(rng, d);
    Matrix rho = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) rho += vals[i] * U.col(i) * U.col(i).adjoint();
    return expand((rho + rho.adjoint()) / 2.0, p.basis).coeffs;
  };

  if (gap_min > policy.newton_gap || d == 2) {
    // all levels isolated: joint Newton from permuted-spectrum starts
    for (int start = 0; start < budget; ++start) {
      if (static_cast<int>(accepted.size()) >= report.expected_count) break;
      ++report.starts_used;
      Vector l0 = random_start();
      Vector L0 = lstsq_multipliers(pd, l0);
      if (!L0.allFinite()) continue;
      NewtonOutcome nr = newton_joint(pd, l0, L0);
      if (!nr.ok) continue;
      Measured ms = measure(pd, nr.lambda, nr.Lambda);
      ExtremalSolution s;
      s.lambda_c = nr.lambda;
      s.multipliers = nr.Lambda;
      s.energy = energy_of(pd, nr.lambda);
      Matrix rho = bloch_to_density(nr.lambda, p.basis);
      s.entropy = von_neumann_entropy(rho);
      s.classification = SolutionClass::isolated;
      try_accept(std::move(s), ms, policy.solver);
    }
  } else {
    // near-coincident levels: locate branches through the commutator plus
    // spectral-polynomial system, then rebuild each state on an
    // orthonormalized frame with exact target weights
    GnSystem sys;
    sys.pd = &pd;
    for (int i = 0; i < d; ++i) {
      double v = pd.target(i);
      if (sys.clusters.empty() ||
          sys.clusters.back().values.back() - v > policy.newton_gap) {
        sys.clusters.push_back({v, {v}});
      } else {
        sys.clusters.back().values.push_back(v);
      }
    }
    for (auto& c : sys.clusters) {
      double mean = 0.0;
      for (double v : c.values) mean += v;
      c.mean = mean / c.values.size();
      for (double v : c.values) sys.spread = std::max(sys.spread, std::abs(v - c.mean));
    }
    sys.dcomm.resize(pd.m);
    for (int k = 0; k < pd.m; ++k) {
      const Matrix& g = p.basis.generators[k];
      sys.dcomm[k] = Complex(0.0, 0.5) *
                     (p.hamiltonian * g - g * p.hamiltonian);
    }
    // the branch state seeds the reconstruction frame, so its convergence
    // error must sit well below the stationarity gate
    sys.tol = std::max(1e-12 * std::max(1.0, pd.hscale), 10.0 * sys.spread);

    double branch_total = 1.0;
    for (int i = 2; i <= d; ++i) branch_total *= i;
    for (const auto& c : sys.clusters) {
      for (size_t i = 2; i <= c.values.size(); ++i) branch_total /= static_cast<double>(i);
    }
    const int expected_branches = static_cast<int>(branch_total + 0.5);

    std::vector<Vector> branch_lambdas;
    for (int start = 0; start < budget; ++start) {
      if (static_cast<int>(branch_lambdas.size()) >= expected_branches) break;
      ++report.starts_used;
      std::optional<Vector> sol = gn_solve(sys, random_start());
      if (!sol) continue;
      bool fresh = true;
      for (const auto& b : branch_lambdas) {
        if ((b - *sol).cwiseAbs().maxCoeff() <= 1e-5) {
          fresh = false;
          break;
        }
      }
      if (fresh) branch_lambdas.push_back(*sol);
    }

    const int K = static_cast<int>(sys.clusters.size());

    // in-cluster arrangements of the true values (a single arrangement
    // when the cluster is an exact tie)
    std::vector<std::vector<std::vector<double>>> arrangements;
    for (const auto& c : sys.clusters) {
      std::vector<double> v = c.values;
      std::sort(v.begin(), v.end());
      std::vector<std::vector<double>> perms;
      do {
        perms.push_back(v);
      } while (std::next_permutation(v.begin(), v.end()));
      arrangements.push_back(std::move(perms));
    }

    for (const Vector& bl : branch_lambdas) {
      Matrix rho_b = bloch_to_density(bl, p.basis);
      // The frame comes from the branch state itself: its weight clusters
      // are separated by construction, so eigh(rho_b) fixes the frame up to
      // rotations inside each cluster. Those are resolved by diagonalizing
      // the compression of H onto the cluster subspace, so the reported
      // energies depend only on traces of H against solver-derived
      // projectors, never on a direct diagonalization of H.
      EigenDecomposition edR = eigh(rho_b);

      std::vector<std::vector<int>> members(K);
      for (int i = 0; i < d; ++i) {
        double w = edR.eigenvalues(i);
        int bestk = 0;
        for (int k = 1; k < K; ++k) {
          if (std::abs(w - sys.clusters[k].mean) <
              std::abs(w - sys.clusters[bestk].mean)) {
            bestk = k;
          }
        }
        members[bestk].push_back(i);
      }
      bool labeled = true;
      for (int k = 0; k < K; ++k) {
        labeled &= members[k].size() == sys.clusters[k].values.size();
      }
      if (!labeled) continue;  // branch state too rough to trust

      Matrix V = edR.eigenvectors;
      for (int k = 0; k < K; ++k) {
        const int nk = static_cast<int>(members[k].size());
        if (nk < 2) continue;
        Matrix W(d, nk);
        for (int j = 0; j < nk; ++j) W.col(j) = V.col(members[k][j]);
        Matrix Hw = W.adjoint() * p.hamiltonian * W;
        EigenDecomposition eh = eigh((Hw + Hw.adjoint()) / 2.0);
        Matrix Wr = W * eh.eigenvectors;
        // eigh orders ascending, so the cluster's slots come out in
        // ascending energy
        for (int j = 0; j < nk; ++j) V.col(members[k][j]) = Wr.col(j);
      }
      orthonormalize(V);

      // slot order: clusters by descending mean, ascending energy inside
      std::vector<FrameSlot> slots;
      slots.reserve(d);
      for (int k = 0; k < K; ++k) {
        for (int i : members[k]) {
          FrameSlot s;
          s.proj = V.col(i) * V.col(i).adjoint();
          s.energy = trace_product(p.hamiltonian, s.proj);
          s.weight = sys.clusters[k].mean;
          slots.push_back(std::move(s));
        }
      }

      // Split-weight certificates cannot measure below the eigenframe
      // misalignment of a double-rounded state; see NumericPolicy.
      double e_lo = slots.front().energy;
      double e_hi = slots.front().energy;
      for (const FrameSlot& fs : slots) {
        e_lo = std::min(e_lo, fs.energy);
        e_hi = std::max(e_hi, fs.energy);
      }
      const double deficient_gate = std::max(
          policy.solver,
          policy.deficient_gate * (1.0 + (e_hi - e_lo)) *
              std::sqrt(d * std::numeric_limits<double>::epsilon()));

      std::vector<size_t> idx(arrangements.size(), 0);
      while (true) {
        std::vector<double> q0(d);
        int pos = 0;
        for (size_t c = 0; c < arrangements.size(); ++c) {
          for (double v : arrangements[c][idx[c]]) q0[pos++] = v;
        }
        Candidate cand = construct_candidate(pd, slots, q0);
        if (cand.merit < std::numeric_limits<double>::infinity()) {
          ExtremalSolution s;
          s.lambda_c = cand.lambda;
          s.multipliers = cand.Lambda;
          // the split-weight state certifies the branch; energy and entropy
          // are reported at the exact target weights it regularizes
          s.energy = cand.target_energy;
          s.entropy = entropy_of_weights(q0);
          s.classification = SolutionClass::isolated;
          try_accept(std::move(s), cand.meas, deficient_gate);
        }
        size_t c = 0;
        while (c < idx.size() && ++idx[c] == arrangements[c].size()) {
          idx[c++] = 0;
        }
        if (c == idx.size()) break;
      }
    }
  }

  if (accepted.empty()) {
    throw SolverFailure("no stationary point met the residual gate; best " +
                            std::to_string(best_attempt),
                        best_attempt);
  }
  sort_and_label(accepted);
  std::vector<ExtremalSolution> unique;
  for (auto& s : accepted) {
    bool fresh = true;
    for (const auto& e : unique) {
      if (same_solution(pd, e, s)) {
        fresh = false;
        break;
      }
    }
    if (fresh) unique.push_back(std::move(s));
  }
  report.solutions = std::move(unique);
  report.best_residual = 0.0;
  for (const auto& s : report.solutions) {
    report.best_residual = std::max(report.best_residual, s.residual);
  }
  return report;
}

}  // namespace qudex
