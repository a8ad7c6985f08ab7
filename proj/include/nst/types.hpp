#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace nst {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using MatrixXcd = Matrix<std::complex<double>>;
using VectorXcd = Vector<std::complex<double>>;

template <class Scalar>
using Real = typename Eigen::NumTraits<Scalar>::Real;

template <class Scalar>
inline constexpr bool is_complex_v = Eigen::NumTraits<Scalar>::IsComplex != 0;

/// Default unit tolerance for algebraic identities (double precision).
inline constexpr double kDefaultTol = 1e-10;

/// Thrown when a factorization cannot be completed (rank deficiency,
/// loss of positive definiteness, ...). The message names the defect.
class FactorizationError : public std::runtime_error {
public:
  explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by exact RIP computation when the support count exceeds the
/// enumeration budget.
class EnumerationBudgetError : public std::runtime_error {
public:
  explicit EnumerationBudgetError(const std::string& what) : std::runtime_error(what) {}
};

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* name) {
  if (!m.allFinite())
    throw std::invalid_argument(std::string(name) + ": non-finite entries");
}

}  // namespace nst
