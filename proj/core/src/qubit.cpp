#include "qpurify/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpurify {

Rate::Rate(double eta) : eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::domain_error("measurement rate must be positive and finite, got " + std::to_string(eta));
  }
}

StateCoord::StateCoord(double q) : q_(q) {
  if (!(q >= -1.0 && q <= 1.0)) {
    throw std::domain_error("state coordinate q must lie in [-1, 1], got " + std::to_string(q));
  }
}

TransformedCoord::TransformedCoord(double Q) : Q_(Q) {
  if (!std::isfinite(Q)) {
    throw std::domain_error("transformed coordinate Q must be finite");
  }
}

Purity::Purity(double tau) : tau_(tau) {
  if (!(tau >= 0.5 - kExactTolerance && tau <= 1.0 + kExactTolerance)) {
    throw std::domain_error("purity must lie in [1/2, 1], got " + std::to_string(tau));
  }
}

DensityMatrix::DensityMatrix(const Matrix& entries) : m_(entries) {
  const double herm = std::max({std::abs(m_(0, 0).imag()), std::abs(m_(1, 1).imag()),
                                std::abs(m_(0, 1) - std::conj(m_(1, 0)))});
  if (herm > kExactTolerance) {
    throw std::domain_error("density matrix is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > kExactTolerance) {
    throw std::domain_error("density matrix trace differs from 1 by " + std::to_string(trace() - 1.0));
  }
  if (eigenvalues().first < -kExactTolerance) {
    throw std::domain_error("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::diagonal(double p0, double p1) {
  Matrix m = Matrix::Zero();
  m(0, 0) = p0;
  m(1, 1) = p1;
  return DensityMatrix(m);
}

double DensityMatrix::purity() const noexcept {
  return (m_ * m_).trace().real();
}

std::pair<double, double> DensityMatrix::eigenvalues() const noexcept {
  const double a = m_(0, 0).real();
  const double d = m_(1, 1).real();
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(m_(0, 1)));
  const double mid = 0.5 * (a + d);
  return {mid - half_gap, mid + half_gap};
}

DensityMatrix rho_from_q(StateCoord q) {
  return DensityMatrix::diagonal(0.5 * (1.0 + q.value()), 0.5 * (1.0 - q.value()));
}

StateCoord q_from_rho(const DensityMatrix& rho) {
  if (rho.coherence() > kRoundoffTolerance) {
    throw CoherenceLeakError("coherence leak: |rho_01| = " + std::to_string(rho.coherence()));
  }
  const double q = rho(0, 0).real() - rho(1, 1).real();
  // Trace tolerance can push |q| a hair past 1.
  return StateCoord(std::clamp(q, -1.0, 1.0));
}

Purity purity_of(StateCoord q) {
  return Purity(0.5 * (1.0 + q.value() * q.value()));
}

TransformedCoord q_to_Q(StateCoord q) {
  if (std::abs(q.value()) >= 1.0) {
    throw std::domain_error("atanh(q) requires |q| < 1");
  }
  return TransformedCoord(std::atanh(q.value()));
}

StateCoord Q_to_q(TransformedCoord Q) {
  return StateCoord(std::tanh(Q.value()));
}

}  // namespace qpurify
