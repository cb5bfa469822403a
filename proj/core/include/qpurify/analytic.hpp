#pragma once

// Exact distributions of the monitored-qubit diffusion started at q = 0.
//
//   P_Q(Q,t)     = (2 pi eta t)^(-1/2) exp(-Q^2/(2 eta t) + ln cosh Q - eta t/2)
//   P_Omega(W,t) = t P_Q(W t, t),                 Omega = Q / t
//   P_q(q,t)     = P_Omega(atanh(q)/t, t) / (t (1 - q^2))
//   P_tau(tau,t) = 2 P_q(sqrt(2 tau - 1), t) / sqrt(2 tau - 1)
//
// Every density is assembled in log space and exponentiated once.

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qpurify/qubit.hpp"

namespace qpurify {

/// ln cosh x = |x| + ln(1 + exp(-2|x|)) - ln 2; finite for every finite x.
/// Uses ln(1 + 2 sinh^2(x/2)) for |x| < 1.
double log_cosh(double x) noexcept;

double log_p_Q(double Q, double t, Rate eta);
double log_p_Omega(double Omega, double t, Rate eta);

/// Throw std::domain_error for t <= 0.
double p_Q(double Q, double t, Rate eta);
double p_Omega(double Omega, double t, Rate eta);
/// Throws std::domain_error for |q| >= 1 or t <= 0.
double p_q(double q, double t, Rate eta);
/// Throws std::domain_error unless 1/2 < tau < 1 and t > 0.
double p_tau(double tau, double t, Rate eta);

/// ln P_q at q = tanh(Q), without forming q. Usable where q rounds to +-1.
double log_p_q_at(double Q, double t, Rate eta);
/// ln P_tau at tau = (1 + tanh^2 w) / 2 for w > 0.
double log_p_tau_at(double w, double t, Rate eta);

/// S(Omega, t) = Omega^2 t / (2 eta) - ln cosh(Omega t)
double action_S(double Omega, double t, Rate eta);

enum class ExtremumKind { min, max };

struct Extremum {
  double omega;
  ExtremumKind kind;
};

struct ExtremaReport {
  double time = 0.0;
  double eta = 0.0;
  /// Sorted by omega.
  std::vector<Extremum> extrema;
  /// eta t > 1
  bool above_threshold = false;
};

/// Stationary points of S(., t): Omega = 0 alone for eta t <= 1; otherwise a
/// maximum at 0 and minima at +-Omega* with Omega*/eta = tanh(Omega* t),
/// found by bisection on (1e-15 eta, eta].
ExtremaReport extremal_roots(double t, Rate eta);

/// Omega truncation half-width eta + 12 sqrt(eta / t) for quadrature.
double omega_cutoff(double t, Rate eta);

/// E[q^2] = integral of P_Omega(Omega, t) tanh^2(Omega t).
double mean_q_squared(double t, Rate eta);
/// <tau> = 1/2 + E[q^2] / 2. Throws std::domain_error for t < 0.
double mean_purity(double t, Rate eta);

/// Closed-form terms of the Fokker-Planck equation for P_Q, each divided
/// by P_Q: time derivative, drift -d_Q[eta tanh Q P], diffusion (eta/2) d_Q^2 P.
struct FokkerPlanckTerms {
  double time_derivative;
  double drift;
  double diffusion;
};

FokkerPlanckTerms fokker_planck_terms(double Q, double t, Rate eta);
/// (d_t P - drift - diffusion) / P_Q. Throws std::domain_error for t <= 0.
double fokker_planck_residual(double Q, double t, Rate eta);

enum class DensityKind { P_Q, P_Omega, P_q, P_tau };

std::string_view to_string(DensityKind k) noexcept;
std::optional<DensityKind> parse_density_kind(std::string_view s) noexcept;

/// Whether x lies inside the open support of the density.
bool in_domain(DensityKind kind, double x) noexcept;
double density(DensityKind kind, double x, double t, Rate eta);

/// Total mass over the truncated support, by quadrature in Omega (q and tau
/// are pushed forward through q = tanh(Omega t)).
double total_mass(DensityKind kind, double t, Rate eta);

struct DensityCurve {
  DensityKind which = DensityKind::P_q;
  double eta = 1.0;
  double time = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Evaluates the density on a grid. Throws std::domain_error if any grid
/// point lies outside the support or t <= 0.
DensityCurve sample_density(DensityKind which, Rate eta, double t, std::span<const double> grid);

}  // namespace qpurify
