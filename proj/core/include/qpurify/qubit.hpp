#pragma once

// Value types for a single qubit monitored in the fixed computational basis
// {|0>, |1>}, with sigma_z = diag(1, -1).

#include <complex>
#include <stdexcept>

#include <Eigen/Core>

namespace qpurify {

/// Tolerance for identities that hold in exact arithmetic.
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for checks that accumulate roundoff over many steps.
inline constexpr double kRoundoffTolerance = 1e-9;

/// Raised when a state that should be diagonal carries off-diagonal weight.
class CoherenceLeakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measurement rate eta (1/time), strictly positive.
class Rate {
 public:
  explicit Rate(double eta);
  double value() const noexcept { return eta_; }

 private:
  double eta_;
};

/// Bloch-z coordinate q in [-1, 1]; rho = (1 + q sigma_z) / 2.
class StateCoord {
 public:
  explicit StateCoord(double q);
  double value() const noexcept { return q_; }

 private:
  double q_;
};

/// Q = atanh(q); unbounded but finite.
class TransformedCoord {
 public:
  explicit TransformedCoord(double Q);
  double value() const noexcept { return Q_; }

 private:
  double Q_;
};

/// tr(rho^2), in [1/2, 1] for a qubit.
class Purity {
 public:
  explicit Purity(double tau);
  double value() const noexcept { return tau_; }

 private:
  double tau_;
};

/// 2x2 Hermitian, unit-trace, positive semidefinite matrix. Construction
/// validates all three properties to kExactTolerance.
class DensityMatrix {
 public:
  using Matrix = Eigen::Matrix2cd;

  explicit DensityMatrix(const Matrix& entries);
  static DensityMatrix diagonal(double p0, double p1);

  const Matrix& entries() const noexcept { return m_; }
  std::complex<double> operator()(int row, int col) const { return m_(row, col); }

  double trace() const noexcept { return m_.trace().real(); }
  /// tr(rho^2)
  double purity() const noexcept;
  /// |rho_01|
  double coherence() const noexcept { return std::abs(m_(0, 1)); }
  /// Eigenvalues in ascending order.
  std::pair<double, double> eigenvalues() const noexcept;

 private:
  Matrix m_;
};

DensityMatrix rho_from_q(StateCoord q);

/// q = rho_00 - rho_11. Throws CoherenceLeakError if |rho_01| > 1e-9.
StateCoord q_from_rho(const DensityMatrix& rho);

/// tau = (1 + q^2) / 2
Purity purity_of(StateCoord q);

/// Throws std::domain_error for |q| >= 1.
TransformedCoord q_to_Q(StateCoord q);
StateCoord Q_to_q(TransformedCoord Q);

}  // namespace qpurify
