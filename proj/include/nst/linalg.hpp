#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "nst/support.hpp"
#include "nst/types.hpp"

namespace nst {

enum class PreconditionMode { Half, Full };

/// Largest singular value, via a full decomposition (this module targets
/// small dense matrices).
template <class Scalar>
double spectral_norm(const Matrix<Scalar>& m) {
  require_finite(m, "spectral_norm");
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  return svd.singularValues()(0);
}

/// Cholesky factorization of AA*, cached so the null-space tuning step can be
/// applied repeatedly without refactoring. Throws FactorizationError when A
/// does not have full row rank.
template <class Scalar>
class RowGram {
public:
  explicit RowGram(const Matrix<Scalar>& a) {
    const Matrix<Scalar> gram = a * a.adjoint();
    llt_.compute(gram);
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    const auto& packed = llt_.matrixLLT();
    for (Index i = 0; i < packed.rows(); ++i) {
      const double d = std::abs(packed(i, i));
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    if (llt_.info() != Eigen::Success || dmin <= 0.0 ||
        (dmax / dmin) * (dmax / dmin) > 1e14) {
      std::ostringstream msg;
      msg << "Cholesky of AA* failed: matrix (" << a.rows() << "x" << a.cols()
          << ") is rank-deficient in its rows (rank(A) < M), (AA*)^{-1} does not exist";
      throw FactorizationError(msg.str());
    }
  }

  /// (AA*)^{-1} r.
  Vector<Scalar> solve(const Vector<Scalar>& r) const { return llt_.solve(r); }

  Matrix<Scalar> solve(const Matrix<Scalar>& r) const { return llt_.solve(r); }

private:
  Eigen::LLT<Matrix<Scalar>> llt_;
};

/// Orthogonal projector onto ker(A): P = I - A*(AA*)^{-1}A. Satisfies P = P*,
/// P^2 = P and AP = 0; computed once and reusable across iterations.
template <class Scalar>
Matrix<Scalar> null_space_projector(const Matrix<Scalar>& a) {
  require_finite(a, "null_space_projector");
  const RowGram<Scalar> gram(a);
  const Index n = a.cols();
  Matrix<Scalar> p = Matrix<Scalar>::Identity(n, n) - a.adjoint() * gram.solve(Matrix<Scalar>(a));
  return p;
}

/// Minimum-l2-norm solution of Ax = y, i.e. A*(AA*)^{-1} y.
template <class Scalar>
Vector<Scalar> min_norm_feasible(const Matrix<Scalar>& a, const Vector<Scalar>& y) {
  require_finite(a, "min_norm_feasible");
  require_finite(y, "min_norm_feasible");
  if (y.size() != a.rows())
    throw std::invalid_argument("min_norm_feasible: len(y) != M");
  const RowGram<Scalar> gram(a);
  return a.adjoint() * gram.solve(y);
}

/// z = argmin || A_T z - b ||_2 over z of length |T|.
///
/// Solved by Cholesky on the Gram matrix A_T*A_T when a cheap pivot-ratio
/// condition proxy stays below 1e8, with a column-pivoted QR fallback
/// otherwise. Throws FactorizationError (carrying |T| and the condition
/// estimate) when the columns A_T are linearly dependent.
template <class Scalar>
Vector<Scalar> restricted_ls(const Matrix<Scalar>& a, const SupportSet& t,
                             const Vector<Scalar>& b) {
  if (b.size() != a.rows())
    throw std::invalid_argument("restricted_ls: len(b) != M");
  if (t.empty())
    throw std::invalid_argument("restricted_ls: empty support");
  if (!t.empty() && t[t.size() - 1] >= a.cols())
    throw std::invalid_argument("restricted_ls: support index >= N");

  const Index k = t.size();
  const Matrix<Scalar> at = columns(a, t);

  auto fail = [&](double cond) {
    std::ostringstream msg;
    msg << "restricted_ls: singular system, columns A_T are linearly dependent"
        << " (|T| = " << k << ", M = " << a.rows() << ", cond estimate ";
    if (std::isfinite(cond))
      msg << cond;
    else
      msg << "inf";
    msg << ")";
    throw FactorizationError(msg.str());
  };

  if (k > a.rows()) fail(std::numeric_limits<double>::infinity());

  const Matrix<Scalar> gram = at.adjoint() * at;
  Eigen::LLT<Matrix<Scalar>> llt(gram);
  double cond = std::numeric_limits<double>::infinity();
  if (llt.info() == Eigen::Success) {
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    const auto& packed = llt.matrixLLT();
    for (Index i = 0; i < k; ++i) {
      const double d = std::abs(packed(i, i));
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    if (dmin > 0.0) cond = (dmax / dmin) * (dmax / dmin);
    if (cond < 1e8) return llt.solve(at.adjoint() * b);
  }

  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(at);
  qr.setThreshold(1e-12);
  if (qr.rank() < k) fail(cond);
  return qr.solve(b);
}

/// Half mode: (AA*)^{-1/2} A via symmetric eigendecomposition of AA*, whose
/// rows are orthonormal by construction. Full mode: (AA*)^{-1} A.
template <class Scalar>
Matrix<Scalar> precondition(const Matrix<Scalar>& a, PreconditionMode mode) {
  require_finite(a, "precondition");
  const Matrix<Scalar> gram = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(gram);
  if (eig.info() != Eigen::Success)
    throw FactorizationError("precondition: eigendecomposition of AA* failed");
  const auto& lambda = eig.eigenvalues();
  const double lmax = lambda(lambda.size() - 1);
  const double tol = 1e-12 * std::max(lmax, 1.0);
  if (lambda(0) <= tol) {
    std::ostringstream msg;
    msg << "precondition: AA* has a non-positive eigenvalue beyond tolerance ("
        << lambda(0) << " <= " << tol << "); A is rank-deficient in its rows";
    throw FactorizationError(msg.str());
  }
  Vector<Scalar> scale(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i)
    scale(i) = Scalar(mode == PreconditionMode::Half ? 1.0 / std::sqrt(lambda(i))
                                                     : 1.0 / lambda(i));
  const Matrix<Scalar>& v = eig.eigenvectors();
  return v * scale.asDiagonal() * v.adjoint() * a;
}

}  // namespace nst
