#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

#include "jordan/errors.hpp"

namespace jordan {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Comparison thresholds used throughout: eq_tol decides matrix identity
/// (Frobenius distance), residual_tol bounds verification residuals.
struct Tolerance {
  double eq_tol = 1e-8;
  double residual_tol = 1e-8;

  Tolerance() = default;
  Tolerance(double eq, double residual) : eq_tol(eq), residual_tol(residual) {
    if (!(eq_tol >= 0.0 && eq_tol < 1e-4) ||
        !(residual_tol >= 0.0 && residual_tol < 1e-4)) {
      throw error("tolerances must lie in [0, 1e-4)");
    }
  }
};

inline void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw dimension_error(std::string(who) + ": matrix must be square with dim >= 1");
  }
}

inline bool finite_entries(const ComplexMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

inline ComplexMatrix identity_matrix(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw dimension_error("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "mat_mul");
  require_square(b, "mat_mul");
  if (a.rows() != b.rows()) throw dimension_error("mat_mul: dimension mismatch");
  return a * b;
}

inline Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  if (svd.info() != Eigen::Success) {
    throw numeric_error("singular value computation did not converge");
  }
  return svd.singularValues();
}

/// Largest singular value. For 1x1 this is just the modulus, which keeps
/// tight loops (Monte-Carlo classification) cheap.
inline double spectral_norm(const ComplexMatrix& a) {
  require_square(a, "spectral_norm");
  if (a.rows() == 1) return std::abs(a(0, 0));
  return singular_values(a)(0);
}

/// sigma_max / sigma_min; +inf when exactly singular.
inline double condition_number(const ComplexMatrix& a) {
  require_square(a, "condition_number");
  Eigen::VectorXd s = singular_values(a);
  double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

/// Inverse via SVD with a condition guard: inputs with cond > 1e12 are
/// rejected rather than silently amplifying noise.
inline ComplexMatrix mat_inverse(const ComplexMatrix& a) {
  require_square(a, "mat_inverse");
  constexpr double cond_limit = 1e12;
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw numeric_error("mat_inverse: singular value computation did not converge");
  }
  const Eigen::VectorXd& s = svd.singularValues();
  double smin = s(s.size() - 1);
  if (smin <= 0.0 || s(0) / smin > cond_limit) {
    throw numeric_error("mat_inverse: matrix is singular or ill-conditioned");
  }
  return svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal() *
         svd.matrixU().adjoint();
}

/// All n eigenvalues with multiplicity, via Schur reduction capped at
/// 100*n sweeps. Exceeding the cap raises, never returns garbage.
inline std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  require_square(a, "eigenvalues");
  Eigen::ComplexSchur<ComplexMatrix> schur;
  schur.setMaxIterations(100 * static_cast<int>(a.rows()));
  schur.compute(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    throw numeric_error("eigenvalues: iteration cap exceeded");
  }
  std::vector<Complex> out(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) out[static_cast<std::size_t>(i)] = schur.matrixT()(i, i);
  return out;
}

/// Upper-triangular c with c* c = p, for Hermitian positive definite p.
inline ComplexMatrix cholesky(const ComplexMatrix& p, double hermitian_tol = 1e-8) {
  require_square(p, "cholesky");
  double scale = std::max(1.0, p.norm());
  if ((p - p.adjoint()).norm() > hermitian_tol * scale) {
    throw numeric_error("cholesky: matrix is not Hermitian");
  }
  ComplexMatrix sym = (p + p.adjoint()) / 2.0;
  Eigen::LLT<ComplexMatrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw numeric_error("cholesky: nonpositive pivot (matrix not positive definite)");
  }
  return llt.matrixU();
}

}  // namespace jordan
