#include "qudex/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qudex {

void check_hermitian(const Matrix& M, double tol) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("matrix is not square");
  }
  double asym = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max asymmetry " << asym;
    throw std::invalid_argument(os.str());
  }
}

EigenDecomposition eigh(const Matrix& M) {
  check_hermitian(M);
  const int d = static_cast<int>(M.rows());
  Matrix A = (M + M.adjoint()) / 2.0;
  Matrix V = Matrix::Identity(d, d);

  const double scale = std::max(1.0, A.norm());
  const double target = 1e-13 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        off += std::norm(A(p, q));
      }
    }
    if (std::sqrt(2.0 * off) <= target) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const Complex g = A(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300) continue;
        // Phase rotation makes the (p,q) block real symmetric, then a real
        // Jacobi rotation annihilates it.
        const Complex phase = g / ag;  // e^{i phi}
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double tau = (app - aqq) / (2.0 * ag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Unitary R: R(p,p)=c, R(p,q)=-s, R(q,p)=s*conj(phase), R(q,q)=c*conj(phase).
        const Complex rpq = Complex(-s, 0.0);
        const Complex rqp = s * std::conj(phase);
        const Complex rqq = c * std::conj(phase);

        for (int k = 0; k < d; ++k) {
          const Complex akp = A(k, p);
          const Complex akq = A(k, q);
          A(k, p) = akp * c + akq * rqp;
          A(k, q) = akp * rpq + akq * rqq;
        }
        for (int k = 0; k < d; ++k) {
          const Complex apk = A(p, k);
          const Complex aqk = A(q, k);
          A(p, k) = c * apk + std::conj(rqp) * aqk;
          A(q, k) = std::conj(rpq) * apk + std::conj(rqq) * aqk;
        }
        for (int k = 0; k < d; ++k) {
          const Complex vkp = V(k, p);
          const Complex vkq = V(k, q);
          V(k, p) = vkp * c + vkq * rqp;
          V(k, q) = vkp * rpq + vkq * rqq;
        }
        A(p, q) = Complex(0.0, 0.0);
        A(q, p) = Complex(0.0, 0.0);
      }
    }
  }

  Vector vals(d);
  for (int i = 0; i < d; ++i) vals(i) = A(i, i).real();

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return vals(a) < vals(b); });

  EigenDecomposition out;
  out.eigenvalues = Vector(d);
  out.eigenvectors = Matrix(d, d);
  for (int i = 0; i < d; ++i) {
    out.eigenvalues(i) = vals(order[i]);
    Eigen::VectorXcd col = V.col(order[i]);
    int imax = 0;
    double amax = -1.0;
    for (int k = 0; k < d; ++k) {
      double a = std::abs(col(k));
      if (a > amax) {
        amax = a;
        imax = k;
      }
    }
    if (amax > 0.0) col *= std::conj(col(imax)) / amax;
    double nrm = col.norm();
    if (nrm > 0.0) col /= nrm;
    out.eigenvectors.col(i) = col;
  }
  return out;
}

Matrix mat_fn(const Matrix& M, const std::function<double(double)>& f) {
  EigenDecomposition ed = eigh(M);
  const int d = static_cast<int>(M.rows());
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    out += f(ed.eigenvalues(i)) *
           (ed.eigenvectors.col(i) * ed.eigenvectors.col(i).adjoint());
  }
  return (out + out.adjoint()) / 2.0;
}

Matrix mat_exp(const Matrix& M) {
  return mat_fn(M, [](double x) { return std::exp(x); });
}

Matrix mat_log_strict(const Matrix& M, double tol) {
  EigenDecomposition ed = eigh(M);
  if (ed.eigenvalues.minCoeff() <= tol) {
    throw std::domain_error("matrix log requires strictly positive eigenvalues");
  }
  const int d = static_cast<int>(M.rows());
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    out += std::log(ed.eigenvalues(i)) *
           (ed.eigenvectors.col(i) * ed.eigenvectors.col(i).adjoint());
  }
  return (out + out.adjoint()) / 2.0;
}

double trace_product(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols()) {
    throw std::invalid_argument("trace_product: dimension mismatch");
  }
  Complex tr(0.0, 0.0);
  for (int i = 0; i < A.rows(); ++i) {
    tr += (A.row(i) * B.col(i))(0, 0);
  }
  return tr.real();
}

}  // namespace qudex
