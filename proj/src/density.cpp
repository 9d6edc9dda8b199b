#include "qudex/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qudex/policy.hpp"

namespace qudex {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int sign_pm(int n) { return (n % 2 == 1) ? 1 : -1; }  // (-1)^(n-1)

}  // namespace

std::vector<double> purity_moments(const Matrix& rho, int n_max) {
  check_hermitian(rho);
  std::vector<double> out;
  out.reserve(n_max);
  Matrix P = rho;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(P.trace().real());
    if (n < n_max) P = P * rho;
  }
  return out;
}

Vector char_coeffs(const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  std::vector<double> T = purity_moments(rho, d);
  std::vector<double> a(d + 1, 0.0);
  a[0] = 1.0;
  a[1] = T[0];
  for (int j = 2; j <= d; ++j) {
    double s = sign_pm(j) * T[j - 1];
    for (int n = 1; n <= j - 1; ++n) {
      s += sign_pm(n) * a[j - n] * T[n - 1];
    }
    a[j] = s / j;
  }
  Vector out(d - 1);
  for (int j = 2; j <= d; ++j) out(j - 2) = a[j];
  return out;
}

CharData char_data(const GeneratorBasis& basis, const Vector& lambda, int order) {
  const int d = basis.dim;
  const int m = static_cast<int>(basis.generators.size());
  Matrix rho = bloch_to_density(lambda, basis);

  // P[i] = rho^i, i = 0..d-1
  std::vector<Matrix> P(d);
  P[0] = Matrix::Identity(d, d);
  for (int i = 1; i < d; ++i) P[i] = P[i - 1] * rho;

  std::vector<double> T(d + 1, 0.0);
  for (int n = 1; n <= d; ++n) {
    T[n] = (n < d) ? P[n].trace().real() : (P[d - 1] * rho).trace().real();
  }

  std::vector<Vector> dT(d + 1);
  std::vector<Eigen::MatrixXd> d2T(d + 1);
  if (order >= 1) {
    for (int n = 1; n <= d; ++n) {
      dT[n] = Vector::Zero(m);
      for (int q = 0; q < m; ++q) {
        dT[n](q) = 0.5 * n * trace_product(P[n - 1], basis.generators[q]);
      }
    }
  }
  if (order >= 2) {
    d2T[1] = Eigen::MatrixXd::Zero(m, m);  // T_1 is affine in lambda
    // E[i][q] = rho^i g_q
    std::vector<std::vector<Matrix>> E(d - 1);
    for (int i = 0; i <= d - 2; ++i) {
      E[i].resize(m);
      for (int q = 0; q < m; ++q) E[i][q] = P[i] * basis.generators[q];
    }
    for (int n = 2; n <= d; ++n) {
      d2T[n] = Eigen::MatrixXd::Zero(m, m);
      for (int q = 0; q < m; ++q) {
        for (int r = 0; r <= q; ++r) {
          Complex s(0.0, 0.0);
          for (int i = 0; i <= n - 2; ++i) {
            const Matrix& A = E[i][r];
            const Matrix& B = E[n - 2 - i][q];
            for (int row = 0; row < d; ++row) s += (A.row(row) * B.col(row))(0, 0);
          }
          double v = 0.25 * n * s.real();
          d2T[n](q, r) = v;
          d2T[n](r, q) = v;
        }
      }
    }
  }

  CharData out;
  out.a = Vector(d + 1);
  out.a(0) = 1.0;
  out.a(1) = T[1];
  out.Da.assign(d + 1, Vector::Zero(m));
  // dT[1] is the constant 0.5 Tr(g_q): zero in exact arithmetic but of order
  // ulp for root-normalized diagonal generators, and it seeds the recursion.
  if (order >= 1) out.Da[1] = dT[1];
  if (order >= 2) out.D2a.assign(d + 1, Eigen::MatrixXd::Zero(m, m));

  for (int j = 2; j <= d; ++j) {
    double s = sign_pm(j) * T[j];
    for (int n = 1; n <= j - 1; ++n) s += sign_pm(n) * out.a(j - n) * T[n];
    out.a(j) = s / j;

    if (order >= 1) {
      Vector g = sign_pm(j) * dT[j];
      for (int n = 1; n <= j - 1; ++n) {
        g += sign_pm(n) * (out.Da[j - n] * T[n] + out.a(j - n) * dT[n]);
      }
      out.Da[j] = g / j;
    }
    if (order >= 2) {
      Eigen::MatrixXd Hs = sign_pm(j) * d2T[j];
      for (int n = 1; n <= j - 1; ++n) {
        Hs += sign_pm(n) *
              (out.D2a[j - n] * T[n] + out.Da[j - n] * dT[n].transpose() +
               dT[n] * out.Da[j - n].transpose() + out.a(j - n) * d2T[n]);
      }
      out.D2a[j] = Hs / j;
    }
  }
  return out;
}

CharDataDD char_data_dd(const GeneratorBasis& basis, const Vector& lambda) {
  const int d = basis.dim;
  const int m = static_cast<int>(basis.generators.size());

  auto idx = [d](int i, int j) { return i * d + j; };

  // rho = I/d + sum_k lambda_k g_k / 2, all inputs exact doubles
  std::vector<DDC> rho(d * d, DDC(DD(0.0), DD(0.0)));
  DD inv_d = DD(1.0) / DD(static_cast<double>(d));
  for (int i = 0; i < d; ++i) rho[idx(i, i)].re = inv_d;
  for (int k = 0; k < m; ++k) {
    const Matrix& g = basis.generators[k];
    DD half_l = DD(lambda(k)) * DD(0.5);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Complex gij = g(i, j);
        if (gij == Complex(0.0, 0.0)) continue;
        rho[idx(i, j)].re = rho[idx(i, j)].re + half_l * DD(gij.real());
        rho[idx(i, j)].im = rho[idx(i, j)].im + half_l * DD(gij.imag());
      }
    }
  }

  auto matmul = [&](const std::vector<DDC>& A, const std::vector<DDC>& B) {
    std::vector<DDC> C(d * d, DDC(DD(0.0), DD(0.0)));
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        DDC aik = A[idx(i, k)];
        for (int j = 0; j < d; ++j) {
          C[idx(i, j)] = C[idx(i, j)] + aik * B[idx(k, j)];
        }
      }
    }
    return C;
  };

  // P[i] = rho^i, i = 0..d-1
  std::vector<std::vector<DDC>> P(d);
  P[0].assign(d * d, DDC(DD(0.0), DD(0.0)));
  for (int i = 0; i < d; ++i) P[0][idx(i, i)].re = DD(1.0);
  for (int i = 1; i < d; ++i) P[i] = matmul(P[i - 1], rho);

  auto trace_re = [&](const std::vector<DDC>& A) {
    DD t(0.0);
    for (int i = 0; i < d; ++i) t = t + A[idx(i, i)].re;
    return t;
  };
  // Re Tr(A g), g from doubles
  auto trace_with_gen = [&](const std::vector<DDC>& A, const Matrix& g) {
    DD t(0.0);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        const Complex gki = g(k, i);
        if (gki == Complex(0.0, 0.0)) continue;
        t = t + A[idx(i, k)].re * DD(gki.real()) - A[idx(i, k)].im * DD(gki.imag());
      }
    }
    return t;
  };

  std::vector<DD> T(d + 1, DD(0.0));
  for (int n = 1; n < d; ++n) T[n] = trace_re(P[n]);
  T[d] = trace_re(matmul(P[d - 1], rho));

  std::vector<std::vector<DD>> dT(d + 1, std::vector<DD>(m, DD(0.0)));
  for (int n = 1; n <= d; ++n) {
    for (int q = 0; q < m; ++q) {
      dT[n][q] = DD(0.5 * n) * trace_with_gen(P[n - 1], basis.generators[q]);
    }
  }

  CharDataDD out;
  out.a.assign(d + 1, DD(0.0));
  out.Da.assign(d + 1, std::vector<DD>(m, DD(0.0)));
  out.a[0] = DD(1.0);
  out.a[1] = T[1];
  // dT[1] is zero only in exact arithmetic; dropping it injects an ulp-scale
  // constant into every later Da column, which dominates the small columns.
  for (int q = 0; q < m; ++q) out.Da[1][q] = dT[1][q];
  for (int j = 2; j <= d; ++j) {
    DD s = DD(static_cast<double>(sign_pm(j))) * T[j];
    for (int n = 1; n <= j - 1; ++n) {
      s = s + DD(static_cast<double>(sign_pm(n))) * out.a[j - n] * T[n];
    }
    out.a[j] = s / DD(static_cast<double>(j));
    for (int q = 0; q < m; ++q) {
      DD g = DD(static_cast<double>(sign_pm(j))) * dT[j][q];
      for (int n = 1; n <= j - 1; ++n) {
        DD term = out.Da[j - n][q] * T[n] + out.a[j - n] * dT[n][q];
        g = g + DD(static_cast<double>(sign_pm(n))) * term;
      }
      out.Da[j][q] = g / DD(static_cast<double>(j));
    }
  }
  return out;
}

bool is_admissible(const Matrix& rho) {
  Vector a = char_coeffs(rho);
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < -policy.admissibility) return false;
  }
  return true;
}

namespace {

// Monic coefficients of x^d - x^{d-1} + c2 x^{d-2} - ..., high to low degree.
std::vector<double> constants_poly(const PurityConstants& c, int d) {
  std::vector<double> p(d + 1, 0.0);
  p[0] = 1.0;
  p[1] = -1.0;
  for (int j = 2; j <= d; ++j) {
    p[j] = ((j % 2 == 0) ? 1.0 : -1.0) * c.c(j - 2);
  }
  return p;
}

DD horner_dd(const std::vector<double>& p, double x) {
  DD v(p[0]);
  for (std::size_t i = 1; i < p.size(); ++i) v = v * DD(x) + DD(p[i]);
  return v;
}

std::vector<double> derivative(const std::vector<double>& p) {
  int n = static_cast<int>(p.size()) - 1;
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = p[i] * (n - i);
  return q;
}

// Durand-Kerner iteration, deterministic start. Returns all complex roots.
std::vector<Complex> all_roots(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size()) - 1;
  double radius = 0.0;
  for (int i = 1; i <= n; ++i) radius = std::max(radius, std::abs(p[i]));
  radius = 1.0 + radius;

  std::vector<Complex> x(n);
  for (int k = 0; k < n; ++k) {
    double ang = 2.0 * 3.14159265358979323846 * k / n + 0.4;
    x[k] = radius * Complex(std::cos(ang), std::sin(ang));
  }
  auto eval = [&](Complex z) {
    Complex v = p[0];
    for (int i = 1; i <= n; ++i) v = v * z + p[i];
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    double moved = 0.0;
    for (int k = 0; k < n; ++k) {
      Complex num = eval(x[k]);
      Complex den(1.0, 0.0);
      for (int j = 0; j < n; ++j) {
        if (j != k) den *= (x[k] - x[j]);
      }
      if (std::abs(den) < 1e-300) continue;
      Complex w = num / den;
      x[k] -= w;
      moved = std::max(moved, std::abs(w));
    }
    if (moved < 1e-14 * (1.0 + radius)) break;
  }
  return x;
}

}  // namespace

std::optional<Vector> spectrum_from_constants(const PurityConstants& c, int d) {
  if (c.c.size() != d - 1) {
    throw std::invalid_argument("constants must provide c_2..c_d");
  }

  double cmax = 0.0;
  for (int i = 0; i < c.c.size(); ++i) cmax = std::max(cmax, std::abs(c.c(i)));
  if (cmax <= 1e-14) {
    Vector p = Vector::Zero(d);
    p(d - 1) = 1.0;  // pure: (0,...,0,1) ascending
    return p;
  }
  bool uniform = true;
  for (int j = 2; j <= d; ++j) {
    double target = binom(d, j) / std::pow(static_cast<double>(d), j);
    if (std::abs(c.c(j - 2) - target) > 1e-12) {
      uniform = false;
      break;
    }
  }
  if (uniform) {
    return Vector::Constant(d, 1.0 / d);
  }
  if (d == 2) {
    double disc = 1.0 - 4.0 * c.c(0);
    if (disc < -1e-14) return std::nullopt;
    disc = std::max(disc, 0.0);
    double delta = std::sqrt(disc);
    Vector p(2);
    p(0) = (1.0 - delta) / 2.0;
    p(1) = (1.0 + delta) / 2.0;
    return p;
  }

  std::vector<double> poly = constants_poly(c, d);
  std::vector<Complex> roots = all_roots(poly);

  double scale = 1.0;
  for (double pc : poly) scale = std::max(scale, std::abs(pc));
  for (const Complex& r : roots) {
    if (std::abs(r.imag()) > 1e-7 * (1.0 + std::abs(r))) return std::nullopt;
  }

  std::vector<double> re(d);
  for (int i = 0; i < d; ++i) re[i] = roots[i].real();
  std::sort(re.begin(), re.end());

  // Cluster close roots, then polish each cluster on the derivative order
  // matching its multiplicity (simple root of that derivative).
  std::vector<std::vector<double>> derivs;  // derivs[0] = poly
  derivs.push_back(poly);
  for (int k = 1; k < d; ++k) derivs.push_back(derivative(derivs[k - 1]));

  Vector out(d);
  int pos = 0;
  int i = 0;
  while (i < d) {
    int j = i;
    while (j + 1 < d && std::abs(re[j + 1] - re[i]) < 1e-6 * (1.0 + std::abs(re[i]))) ++j;
    int mult = j - i + 1;
    double x = 0.0;
    for (int k = i; k <= j; ++k) x += re[k];
    x /= mult;
    const std::vector<double>& target = derivs[mult - 1];
    const std::vector<double> target_d = derivative(target);
    for (int step = 0; step < 6; ++step) {
      DD fv = horner_dd(target, x);
      DD fd = horner_dd(target_d, x);
      if (std::abs(fd.value()) < 1e-300) break;
      double dx = fv.value() / fd.value();
      x -= dx;
      if (std::abs(dx) < 1e-17 * (1.0 + std::abs(x))) break;
    }
    for (int k = 0; k < mult; ++k) out(pos++) = x;
    i = j + 1;
  }

  // Certificate: elementary symmetric polynomials must reproduce the
  // constants and the trace.
  std::vector<DD> e(d + 1, DD(0.0));
  e[0] = DD(1.0);
  for (int k = 0; k < d; ++k) {
    for (int jj = std::min(k + 1, d); jj >= 1; --jj) {
      e[jj] = e[jj] + DD(out(k)) * e[jj - 1];
    }
  }
  if (std::abs(e[1].value() - 1.0) > 1e-8) return std::nullopt;
  for (int jj = 2; jj <= d; ++jj) {
    if (std::abs(e[jj].value() - c.c(jj - 2)) > 1e-8) return std::nullopt;
  }
  for (int k = 0; k < d; ++k) {
    if (out(k) < -policy.admissibility) return std::nullopt;
    if (out(k) < 0.0) out(k) = 0.0;
  }
  return out;
}

FeasibilityResult is_feasible(const PurityConstants& c, int d,
                              const GeneratorBasis& basis) {
  for (int i = 0; i < c.c.size(); ++i) {
    if (c.c(i) < 0.0) {
      throw std::invalid_argument("purity constants must be nonnegative");
    }
  }
  FeasibilityResult res;
  std::optional<Vector> spec = spectrum_from_constants(c, d);
  if (!spec) return res;

  res.feasible = true;
  res.spectrum = Vector(d);
  for (int i = 0; i < d; ++i) res.spectrum(i) = (*spec)(d - 1 - i);  // descending

  Matrix rho = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) rho(i, i) = res.spectrum(i);
  res.witness.dim = d;
  res.witness.lambda = expand(rho, basis).coeffs;
  return res;
}

double von_neumann_entropy(const Matrix& rho) {
  EigenDecomposition ed = eigh(rho);
  double S = 0.0;
  for (int i = 0; i < ed.eigenvalues.size(); ++i) {
    double e = ed.eigenvalues(i);
    if (e < -policy.admissibility) {
      throw std::domain_error("entropy of an inadmissible state");
    }
    if (e <= 0.0) continue;  // 0 ln 0 := 0, clamped round-off included
    S -= e * std::log(e);
  }
  return std::max(S, 0.0);
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  EigenDecomposition er = eigh(rho);
  EigenDecomposition es = eigh(sigma);
  const int d = static_cast<int>(rho.rows());

  // Support condition: rho must not overlap sigma's null space.
  for (int i = 0; i < d; ++i) {
    if (es.eigenvalues(i) < 1e-12) {
      double overlap =
          (es.eigenvectors.col(i).adjoint() * rho * es.eigenvectors.col(i))(0, 0).real();
      if (overlap > 1e-10) return std::numeric_limits<double>::infinity();
    }
  }

  double tr_rho_ln_rho = 0.0;
  for (int i = 0; i < d; ++i) {
    double e = er.eigenvalues(i);
    if (e > 0.0) tr_rho_ln_rho += e * std::log(e);
  }
  double tr_rho_ln_sigma = 0.0;
  for (int i = 0; i < d; ++i) {
    double se = std::max(es.eigenvalues(i), 1e-300);
    double w = (es.eigenvectors.col(i).adjoint() * rho * es.eigenvectors.col(i))(0, 0).real();
    if (es.eigenvalues(i) < 1e-12 && w <= 1e-10) continue;  // negligible weight
    tr_rho_ln_sigma += w * std::log(se);
  }
  return tr_rho_ln_rho - tr_rho_ln_sigma;
}

}  // namespace qudex
