#ifndef LFCOMP_TYPES_HPP
#define LFCOMP_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lfcomp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

// Errors. Everything thrown by the library derives from Error so callers
// (the CLI in particular) can map families of failures to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};
// A linear-fractional denominator (or the Cayley pole) vanished.
struct PoleError : DomainError {
  using DomainError::DomainError;
};
struct NotSelfMapError : DomainError {
  using DomainError::DomainError;
};
struct ClassificationError : DomainError {
  using DomainError::DomainError;
};
struct ReductionError : DomainError {
  using DomainError::DomainError;
};
// Hypotheses of a witness construction are not met.
struct PreconditionError : DomainError {
  using DomainError::DomainError;
};
// A search that theory says must succeed did not (rounding, tolerances).
struct NumericalFailure : Error {
  using Error::Error;
};

/// Hermitian product, linear in the first slot: <z,w> = sum_j z_j conj(w_j).
inline Complex inner(const CVector& z, const CVector& w) { return w.dot(z); }

inline CVector unit_vector(int n, int j = 0) {
  CVector v = CVector::Zero(n);
  v(j) = 1.0;
  return v;
}

inline bool all_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

inline void require_dim(const CVector& v, int n, const char* what) {
  if (v.size() != n) {
    throw DomainError(std::string(what) + ": expected dimension " + std::to_string(n) +
                      ", got " + std::to_string(v.size()));
  }
}

}  // namespace lfcomp

#endif  // LFCOMP_TYPES_HPP
