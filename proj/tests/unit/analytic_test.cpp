#include "qpurify/analytic.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qpurify/stats.hpp"

using namespace qpurify;

namespace {

const double kEtaTimes[] = {0.1, 0.5, 1.0, 2.0, 5.0, 20.0};

double mixture_pdf(double Q, double eta, double t) {
  const double s = eta * t;
  auto g = [&](double m) { return std::exp(-0.5 * (Q - m) * (Q - m) / s) / std::sqrt(2 * std::numbers::pi * s); };
  return 0.5 * (g(s) + g(-s));
}

}  // namespace

TEST(analytic, log_cosh) {
  EXPECT_EQ(log_cosh(0.0), 0.0);
  EXPECT_NEAR(log_cosh(2.0), 1.325002747357864430937751, 1e-15);
  EXPECT_NEAR(log_cosh(-2.0), 1.325002747357864430937751, 1e-15);
  EXPECT_NEAR(log_cosh(1000.0), 1000.0 - std::numbers::ln2, 1e-12);
  // x^2/2 - x^4/12 to double precision
  EXPECT_NEAR(log_cosh(1e-5) / 0.5e-10, 1.0 - 1e-10 / 6.0, 1e-15);
  EXPECT_NEAR(log_cosh(0.5), 0.12011450695827751, 1e-16);
}

TEST(analytic, p_Q_examples) {
  EXPECT_NEAR(p_Q(0.0, 1.0, Rate(1.0)), 0.24197072451914334980, 1e-15);
  EXPECT_EQ(p_Q(1.7, 0.8, Rate(1.3)), p_Q(-1.7, 0.8, Rate(1.3)));
  EXPECT_THROW(p_Q(0.0, 0.0, Rate(1.0)), std::domain_error);
  EXPECT_THROW(p_Q(0.0, -1.0, Rate(1.0)), std::domain_error);
}

TEST(analytic, p_Q_is_gaussian_mixture) {
  for (double eta : {0.5, 1.0, 2.0}) {
    for (double t : {0.05, 0.5, 2.0, 10.0}) {
      for (int i = -40; i <= 40; ++i) {
        const double Q = 0.25 * i * std::sqrt(eta * t) + 0.1;
        const double ref = mixture_pdf(Q, eta, t);
        if (ref < 1e-300) continue;
        EXPECT_NEAR(p_Q(Q, t, Rate(eta)) / ref, 1.0, 1e-12) << Q << " " << t;
      }
    }
  }
}

TEST(analytic, chain_consistency) {
  const Rate eta(1.3);
  for (double t : {0.1, 0.7, 2.5}) {
    for (double w : {-2.0, -0.4, 0.0, 0.3, 1.1}) {
      EXPECT_NEAR(p_Omega(w, t, eta) / (t * p_Q(w * t, t, eta)), 1.0, 1e-12);
    }
    for (double q : {-0.95, -0.5, 0.0, 0.2, 0.8, 0.999}) {
      const double via_omega = p_Omega(std::atanh(q) / t, t, eta) / (t * (1 - q * q));
      EXPECT_NEAR(p_q(q, t, eta) / via_omega, 1.0, 1e-12) << q;
    }
    for (double tau : {0.51, 0.625, 0.8, 0.99}) {
      const double s = std::sqrt(2 * tau - 1);
      EXPECT_NEAR(p_tau(tau, t, eta) / (2 * p_q(s, t, eta) / s), 1.0, 1e-12) << tau;
    }
  }
  EXPECT_NEAR(p_tau(0.625, 1.0, Rate(1.0)), 4.0 * p_q(0.5, 1.0, Rate(1.0)), 1e-14);
}

TEST(analytic, log_forms_match_direct) {
  const Rate eta(1.0);
  for (double Q : {0.1, 0.8, 2.0}) {
    EXPECT_NEAR(std::exp(log_p_q_at(Q, 1.5, eta)), p_q(std::tanh(Q), 1.5, eta), 1e-12);
    EXPECT_NEAR(std::exp(log_p_tau_at(Q, 1.5, eta)),
                p_tau(0.5 * (1 + std::tanh(Q) * std::tanh(Q)), 1.5, eta), 1e-11);
  }
  // Deep in the tail q rounds to 1 but the log form stays finite.
  EXPECT_TRUE(std::isfinite(log_p_q_at(25.0, 20.0, eta)));
}

TEST(analytic, densities_are_even) {
  const Rate eta(0.8);
  for (double t : {0.2, 3.0}) {
    for (double x : {0.1, 0.55, 0.93}) {
      EXPECT_EQ(p_q(x, t, eta), p_q(-x, t, eta));
      EXPECT_EQ(p_Omega(3 * x, t, eta), p_Omega(-3 * x, t, eta));
    }
  }
}

TEST(analytic, domain_errors) {
  const Rate eta(1.0);
  EXPECT_THROW(p_q(1.0, 1.0, eta), std::domain_error);
  EXPECT_THROW(p_q(-1.0, 1.0, eta), std::domain_error);
  EXPECT_THROW(p_q(0.0, 0.0, eta), std::domain_error);
  EXPECT_THROW(p_tau(0.5, 1.0, eta), std::domain_error);
  EXPECT_THROW(p_tau(1.0, 1.0, eta), std::domain_error);
  EXPECT_THROW(p_Omega(0.0, 0.0, eta), std::domain_error);
  EXPECT_THROW(mean_purity(-1.0, eta), std::domain_error);
  EXPECT_THROW(fokker_planck_residual(0.0, 0.0, eta), std::domain_error);
  const double grid[] = {0.0, 0.5, 1.0};
  EXPECT_THROW(sample_density(DensityKind::P_q, eta, 1.0, grid), std::domain_error);
  EXPECT_THROW(sample_density(DensityKind::P_Q, eta, 0.0, grid), std::domain_error);
}

TEST(analytic, normalization) {
  for (double et : kEtaTimes) {
    for (double eta : {1.0, 2.0}) {
      const double t = et / eta;
      for (DensityKind k : {DensityKind::P_Q, DensityKind::P_Omega, DensityKind::P_q, DensityKind::P_tau}) {
        EXPECT_NEAR(total_mass(k, t, Rate(eta)), 1.0, 1e-6) << to_string(k) << " eta t = " << et;
      }
    }
  }
}

TEST(analytic, normalization_by_independent_quadrature) {
  // Integrate P_q directly in q with Boost over a range that stays clear of
  // the endpoints, where the remaining mass is known from the mixture CDF.
  for (double et : {0.1, 0.5, 1.0, 2.0}) {
    const double edge = 0.999;
    const double inside = oracle::integrate([&](double q) { return p_q(q, et, Rate(1.0)); }, -edge, edge);
    const double expected = oracle::cdf_q(edge, 1.0, et) - oracle::cdf_q(-edge, 1.0, et);
    EXPECT_NEAR(inside, expected, 1e-9) << et;
  }
}

TEST(analytic, action) {
  EXPECT_NEAR(action_S(1.0, 2.0, Rate(1.0)), -0.32500274735786443094, 1e-14);
  EXPECT_EQ(action_S(0.0, 3.0, Rate(1.0)), 0.0);
}

TEST(analytic, roots_below_and_above_threshold) {
  const Rate eta(1.0);
  const auto below = extremal_roots(0.999, eta);
  ASSERT_EQ(below.extrema.size(), 1u);
  EXPECT_EQ(below.extrema[0].omega, 0.0);
  EXPECT_EQ(below.extrema[0].kind, ExtremumKind::min);
  EXPECT_FALSE(below.above_threshold);

  const auto above = extremal_roots(1.001, eta);
  ASSERT_EQ(above.extrema.size(), 3u);
  EXPECT_TRUE(above.above_threshold);
  EXPECT_EQ(above.extrema[1].kind, ExtremumKind::max);
  EXPECT_EQ(above.extrema[0].kind, ExtremumKind::min);
  EXPECT_NEAR(above.extrema[2].omega, 0.054723010317845955, 1e-9);
  EXPECT_EQ(above.extrema[0].omega, -above.extrema[2].omega);

  EXPECT_EQ(extremal_roots(1.0, eta).extrema.size(), 1u);
  EXPECT_EQ(extremal_roots(1.0 - 1e-6, eta).extrema.size(), 1u);
  EXPECT_EQ(extremal_roots(1.0 + 1e-6, eta).extrema.size(), 3u);
}

TEST(analytic, root_values) {
  EXPECT_NEAR(extremal_roots(2.0, Rate(1.0)).extrema[2].omega, 0.95750402407726874068, 1e-12);
  EXPECT_NEAR(extremal_roots(50.0, Rate(1.0)).extrema[2].omega, 1.0, 1e-12);
  // Scaling: Omega* = eta x(eta t).
  EXPECT_NEAR(extremal_roots(1.0, Rate(2.0)).extrema[2].omega, 2.0 * 0.95750402407726874068, 1e-11);
  for (double et = 1.01; et < 60.0; et *= 1.17) {
    const double ref = static_cast<double>(oracle::tanh_fixed_point(et));
    EXPECT_NEAR(extremal_roots(et, Rate(1.0)).extrema[2].omega, ref, 1e-12) << et;
  }
  EXPECT_THROW(extremal_roots(0.0, Rate(1.0)), std::domain_error);
}

TEST(analytic, fokker_planck_residual_grid) {
  double worst = 0.0;
  for (double eta : {0.5, 1.0, 2.0})
    for (int i = 0; i <= 120; ++i)
      for (int j = 0; j <= 49; ++j) {
        const double Q = -6.0 + 0.1 * i;
        const double t = 0.1 + 0.1 * j;
        worst = std::max(worst, std::abs(fokker_planck_residual(Q, t, Rate(eta))));
      }
  EXPECT_LT(worst, 1e-9);
}

TEST(analytic, fokker_planck_terms_match_finite_differences) {
  // Five-point stencils, truncation error O(h^4).
  auto d1 = [](auto f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
  };
  auto d2 = [](auto f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
  };
  const Rate eta(1.2);
  for (double t : {0.3, 1.0, 4.0}) {
    for (double Q : {-2.5, -0.3, 0.0, 0.7, 3.0}) {
      const auto terms = fokker_planck_terms(Q, t, eta);
      const double p = p_Q(Q, t, eta);
      const double dt_fd = d1([&](double s) { return p_Q(Q, s, eta); }, t, 1e-3 * t) / p;
      const double drift_fd = -d1([&](double x) { return eta.value() * std::tanh(x) * p_Q(x, t, eta); }, Q, 1e-3) / p;
      const double diff_fd = 0.5 * eta.value() * d2([&](double x) { return p_Q(x, t, eta); }, Q, 1e-3) / p;
      const double scale = 1.0 + std::abs(terms.time_derivative);
      EXPECT_NEAR(terms.time_derivative, dt_fd, 1e-6 * scale) << Q << " " << t;
      EXPECT_NEAR(terms.drift, drift_fd, 1e-6 * scale) << Q << " " << t;
      EXPECT_NEAR(terms.diffusion, diff_fd, 1e-5 * scale) << Q << " " << t;
    }
  }
}

TEST(analytic, mean_purity_reference_values) {
  // 40-digit references
  const std::pair<double, double> table[] = {
      {0.1, 0.54567030060243894}, {0.2, 0.58454700723471955}, {0.5, 0.67505670233756541},
      {1.0, 0.77520024539666359}, {2.0, 0.88449088903535219}, {5.0, 0.98076859431530866},
      {20.0, 0.99999398168956226}};
  for (auto [et, ref] : table) {
    EXPECT_NEAR(mean_purity(et, Rate(1.0)), ref, 1e-10) << et;
    EXPECT_NEAR(mean_purity(et / 2.0, Rate(2.0)), ref, 1e-10) << et;
  }
  EXPECT_EQ(mean_purity(0.0, Rate(1.0)), 0.5);
}

TEST(analytic, mean_purity_matches_oracle_and_is_monotone) {
  double prev = 0.5;
  for (int i = 1; i <= 100; ++i) {
    const double et = 0.05 * i;
    const double m = mean_purity(et, Rate(1.0));
    EXPECT_NEAR(m, 0.5 + 0.5 * oracle::mean_q_squared(1.0, et), 1e-10) << et;
    EXPECT_GT(m, prev);
    EXPECT_LT(m, 1.0);
    prev = m;
  }
}

TEST(analytic, mean_q_squared_reference) {
  EXPECT_NEAR(mean_q_squared(2.0, Rate(1.0)), 0.7689817780707044, 1e-10);
  EXPECT_NEAR(mean_q_squared(0.5, Rate(1.0)), 0.3501134046751308, 1e-10);
}

TEST(analytic, omega_concentrates_at_rates) {
  // Omega is a mixture of N(+-eta, eta/t): the peaks sharpen as 1/sqrt(eta t).
  for (double t : {20.0, 200.0}) {
    auto f = [&](double w) { return p_Omega(w, t, Rate(1.0)); };
    const double mass = oracle::integrate(f, 0.8, 1.2) + oracle::integrate(f, -1.2, -0.8);
    const double ref = oracle::cdf_Omega(1.2, 1.0, t) - oracle::cdf_Omega(0.8, 1.0, t) +
                       oracle::cdf_Omega(-0.8, 1.0, t) - oracle::cdf_Omega(-1.2, 1.0, t);
    EXPECT_NEAR(mass, ref, 1e-10) << t;
  }
  // 2 Phi(0.2 sqrt 20) - 1, the far component contributes < 1e-80
  EXPECT_NEAR(oracle::cdf_Omega(1.2, 1.0, 20.0) - oracle::cdf_Omega(0.8, 1.0, 20.0), 0.5 * 0.62890663047730245, 1e-12);
  const double wide = oracle::integrate([](double w) { return p_Omega(w, 200.0, Rate(1.0)); }, 0.8, 1.2);
  EXPECT_GT(2 * wide, 0.99);
}

TEST(analytic, omega_unimodal_before_threshold) {
  const double t = 0.5;
  const double L = 1.0 + 6.0 * std::sqrt(1.0 / t);
  std::vector<double> grid;
  for (int i = 0; i < 601; ++i) grid.push_back(-L + 2 * L * i / 600.0);
  const auto curve = sample_density(DensityKind::P_Omega, Rate(1.0), t, grid);
  int maxima = 0;
  std::size_t where = 0;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
    if (curve.points[i].second > curve.points[i - 1].second && curve.points[i].second >= curve.points[i + 1].second) {
      ++maxima;
      where = i;
    }
  }
  EXPECT_EQ(maxima, 1);
  EXPECT_EQ(where, 300u);
}

TEST(analytic, density_dispatch) {
  EXPECT_EQ(parse_density_kind("P_tau"), DensityKind::P_tau);
  EXPECT_FALSE(parse_density_kind("P_x"));
  EXPECT_TRUE(in_domain(DensityKind::P_Q, -50.0));
  EXPECT_FALSE(in_domain(DensityKind::P_q, 1.0));
  EXPECT_FALSE(in_domain(DensityKind::P_tau, 0.5));
  EXPECT_TRUE(in_domain(DensityKind::P_tau, 0.75));
  EXPECT_EQ(density(DensityKind::P_q, 0.3, 1.0, Rate(1.0)), p_q(0.3, 1.0, Rate(1.0)));
}

TEST(analytic, tabulated_cdf_matches_closed_form) {
  for (double et : {0.1, 1.0, 2.0, 5.0}) {
    const Rate eta(1.0);
    const AnalyticCdf fq(DensityKind::P_q, eta, et), ftau(DensityKind::P_tau, eta, et),
        fQ(DensityKind::P_Q, eta, et), fw(DensityKind::P_Omega, eta, et);
    for (int i = -99; i <= 99; ++i) {
      const double q = i / 100.0;
      ASSERT_NEAR(fq(q), oracle::cdf_q(q, 1.0, et), 1e-5) << et << " " << q;
      const double Q = 3.0 * q * std::sqrt(et) + q * et;
      ASSERT_NEAR(fQ(Q), oracle::cdf_Q(Q, 1.0, et), 1e-5);
      ASSERT_NEAR(fw(Q / et), oracle::cdf_Omega(Q / et, 1.0, et), 1e-5);
      const double tau = 0.75 + 0.25 * q;
      ASSERT_NEAR(ftau(tau), oracle::cdf_tau(tau, 1.0, et), 1e-5);
    }
    EXPECT_EQ(fq(-1.0), 0.0);
    EXPECT_EQ(fq(1.0), 1.0);
    EXPECT_EQ(ftau(0.5), 0.0);
    EXPECT_EQ(ftau(1.0), 1.0);
  }
}
