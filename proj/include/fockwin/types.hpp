#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fockwin {

/// Complex 4x4 matrix over the Fock window basis
/// {|n1,m1>, |n1,m1+1>, |n1+1,m1>, |n1+1,m1+1>}.
///
/// Row/column index i = 2*a + b where a (b) is 0 for the lower and 1 for the
/// upper Fock level of cavity A (B), so the window doubles as a logical
/// two-qubit basis.
template <typename Real>
using DensityMatrix = Eigen::Matrix<std::complex<Real>, 4, 4>;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

template <typename Real>
using Vector4c = Eigen::Matrix<std::complex<Real>, 4, 1>;

using DensityMatrixd = DensityMatrix<double>;
using Matrix2cd = Matrix2c<double>;

/// Base Fock indices of the two cavities.
struct FockWindow {
  int n1 = 0;
  int m1 = 0;

  friend bool operator==(const FockWindow&, const FockWindow&) = default;
};

void check_window(const FockWindow& w);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated (bad parameter, non-normalized input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix does not have the sparsity pattern a closed form requires.
class PatternError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real/Hermitian came out with a residue above tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// exp(r * w0 * t) in the Ohmic kernel would exceed double range.
class OverflowError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double value, double coarse_value)
      : Error(what), value_(value), coarse_value_(coarse_value) {}
  double value() const noexcept { return value_; }
  double coarse_value() const noexcept { return coarse_value_; }

 private:
  double value_;
  double coarse_value_;
};

inline void check_window(const FockWindow& w) {
  if (w.n1 < 0 || w.m1 < 0) {
    throw DomainError("Fock window indices must be non-negative");
  }
}

}  // namespace fockwin
