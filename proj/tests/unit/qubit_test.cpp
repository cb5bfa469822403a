#include "qpurify/qubit.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

using namespace qpurify;

TEST(qubit, rho_from_q_examples) {
  const DensityMatrix mixed = rho_from_q(StateCoord(0.0));
  EXPECT_DOUBLE_EQ(mixed(0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(mixed(1, 1).real(), 0.5);
  EXPECT_EQ(mixed(0, 1), std::complex<double>(0.0, 0.0));

  const DensityMatrix up = rho_from_q(StateCoord(1.0));
  EXPECT_DOUBLE_EQ(up(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(up(1, 1).real(), 0.0);

  const DensityMatrix r = rho_from_q(StateCoord(-0.5));
  EXPECT_DOUBLE_EQ(r(0, 0).real(), 0.25);
  EXPECT_DOUBLE_EQ(r(1, 1).real(), 0.75);
}

TEST(qubit, state_coord_rejects_out_of_range) {
  EXPECT_THROW(StateCoord(1.0000001), std::domain_error);
  EXPECT_THROW(StateCoord(-2.0), std::domain_error);
  EXPECT_THROW(StateCoord(std::nan("")), std::domain_error);
  EXPECT_THROW(Rate(0.0), std::domain_error);
  EXPECT_THROW(Rate(-1.0), std::domain_error);
  EXPECT_THROW(TransformedCoord{std::numeric_limits<double>::infinity()}, std::domain_error);
  EXPECT_THROW(Purity(0.4), std::domain_error);
}

TEST(qubit, q_from_rho_examples) {
  EXPECT_DOUBLE_EQ(q_from_rho(DensityMatrix::diagonal(0.5, 0.5)).value(), 0.0);
  EXPECT_DOUBLE_EQ(q_from_rho(DensityMatrix::diagonal(1.0, 0.0)).value(), 1.0);
  EXPECT_NEAR(q_from_rho(DensityMatrix::diagonal(0.9, 0.1)).value(), 0.8, 1e-15);
}

TEST(qubit, q_from_rho_rejects_coherences) {
  DensityMatrix::Matrix m;
  m << 0.5, std::complex<double>(0.0, 1e-6), std::complex<double>(0.0, -1e-6), 0.5;
  EXPECT_THROW(q_from_rho(DensityMatrix(m)), CoherenceLeakError);

  m << 0.5, 1e-10, 1e-10, 0.5;
  EXPECT_NO_THROW(q_from_rho(DensityMatrix(m)));
}

TEST(qubit, density_matrix_validation) {
  DensityMatrix::Matrix m;
  m << 0.6, 0.1, 0.2, 0.4;  // not Hermitian
  EXPECT_THROW(DensityMatrix{m}, std::domain_error);
  m << 0.6, 0.0, 0.0, 0.5;  // trace 1.1
  EXPECT_THROW(DensityMatrix{m}, std::domain_error);
  m << 1.2, 0.0, 0.0, -0.2;  // negative eigenvalue
  EXPECT_THROW(DensityMatrix{m}, std::domain_error);
}

TEST(qubit, purity_examples) {
  EXPECT_DOUBLE_EQ(purity_of(StateCoord(0.0)).value(), 0.5);
  EXPECT_DOUBLE_EQ(purity_of(StateCoord(1.0)).value(), 1.0);
  EXPECT_DOUBLE_EQ(purity_of(StateCoord(-1.0)).value(), 1.0);
  EXPECT_DOUBLE_EQ(purity_of(StateCoord(0.5)).value(), 0.625);
}

TEST(qubit, atanh_examples) {
  EXPECT_EQ(q_to_Q(StateCoord(0.0)).value(), 0.0);
  EXPECT_EQ(Q_to_q(TransformedCoord(0.0)).value(), 0.0);
  // tanh(1) to 20 digits
  EXPECT_NEAR(q_to_Q(StateCoord(0.76159415595576488812)).value(), 1.0, 1e-12);
  EXPECT_THROW(q_to_Q(StateCoord(1.0)), std::domain_error);
  EXPECT_THROW(q_to_Q(StateCoord(-1.0)), std::domain_error);
}

TEST(qubit, atanh_matches_series) {
  // atanh x = sum x^(2k+1)/(2k+1); converges fast for |x| <= 0.5.
  for (double x : {-0.5, -0.3, 0.01, 0.2, 0.45}) {
    long double sum = 0, term = x;
    for (int k = 0; k < 200; ++k, term *= static_cast<long double>(x) * x) sum += term / (2 * k + 1);
    EXPECT_NEAR(q_to_Q(StateCoord(x)).value(), static_cast<double>(sum), 1e-15);
  }
}

TEST(qubit, grid_invariants) {
  for (int i = -99; i <= 99; ++i) {
    const double q = i / 100.0;
    const DensityMatrix rho = rho_from_q(StateCoord(q));
    EXPECT_NEAR(q_from_rho(rho).value(), q, 1e-12);
    EXPECT_NEAR(purity_of(StateCoord(q)).value(), rho.purity(), 1e-12);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_GE(rho.eigenvalues().first, -1e-12);
    EXPECT_EQ(q_to_Q(StateCoord(-q)).value(), -q_to_Q(StateCoord(q)).value());
  }
}

TEST(qubit, transform_round_trip_near_boundary) {
  for (double q : {-1.0 + 1e-8, -0.999999, -0.9, 0.3, 0.99999, 1.0 - 1e-8}) {
    EXPECT_NEAR(Q_to_q(q_to_Q(StateCoord(q))).value(), q, 1e-12);
  }
}
