#include "qpurify/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qpurify/quadrature.hpp"

namespace qpurify {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // ln(2 pi)

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("time must be positive, got " + std::to_string(t));
  }
}

// Adaptive quadrature with breakpoints; the densities peak at 0 and +-eta.
double integrate_pieces(const std::function<double(double)>& f, std::initializer_list<double> cuts) {
  double sum = 0.0;
  const double* prev = cuts.begin();
  for (const double* it = prev + 1; it != cuts.end(); prev = it++) {
    if (*it > *prev) sum += integrate(f, *prev, *it).value;
  }
  return sum;
}

// ln(1 - q^2) without cancellation near |q| = 1.
double log_one_minus_q2(double q) {
  return std::log1p(-std::abs(q)) + std::log1p(std::abs(q));
}

}  // namespace

double log_cosh(double x) noexcept {
  const double a = std::abs(x);
  if (a < 1.0) {
    // cosh x - 1 = 2 sinh^2(x/2), kept accurate for small x
    const double s = std::sinh(0.5 * a);
    return std::log1p(2.0 * s * s);
  }
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

double log_p_Q(double Q, double t, Rate eta) {
  require_positive_time(t);
  const double et = eta.value() * t;
  return -0.5 * (kLog2Pi + std::log(et)) - Q * Q / (2.0 * et) + log_cosh(Q) - 0.5 * et;
}

double log_p_Omega(double Omega, double t, Rate eta) {
  require_positive_time(t);
  const double e = eta.value();
  return 0.5 * (std::log(t / e) - kLog2Pi) - Omega * Omega * t / (2.0 * e) + log_cosh(Omega * t) - 0.5 * e * t;
}

double p_Q(double Q, double t, Rate eta) { return std::exp(log_p_Q(Q, t, eta)); }

double p_Omega(double Omega, double t, Rate eta) { return std::exp(log_p_Omega(Omega, t, eta)); }

double p_q(double q, double t, Rate eta) {
  require_positive_time(t);
  if (!(std::abs(q) < 1.0)) throw std::domain_error("P_q requires |q| < 1");
  const double et = eta.value() * t;
  const double Q = std::atanh(q);
  // 1/(1-q^2) prefactor, then ln cosh(atanh q) = -ln(1-q^2)/2.
  const double l = log_one_minus_q2(q);
  return std::exp(-0.5 * (kLog2Pi + std::log(et)) - l - Q * Q / (2.0 * et) - 0.5 * l - 0.5 * et);
}

double p_tau(double tau, double t, Rate eta) {
  require_positive_time(t);
  if (!(tau > 0.5 && tau < 1.0)) throw std::domain_error("P_tau requires 1/2 < tau < 1");
  const double s = std::sqrt(2.0 * tau - 1.0);
  return 2.0 * p_q(s, t, eta) / s;
}

double log_p_q_at(double Q, double t, Rate eta) {
  require_positive_time(t);
  const double et = eta.value() * t;
  // 1/(1-q^2) = cosh^2 Q
  return -0.5 * (kLog2Pi + std::log(et)) + 2.0 * log_cosh(Q) - Q * Q / (2.0 * et) + log_cosh(Q) - 0.5 * et;
}

double log_p_tau_at(double w, double t, Rate eta) {
  if (!(w > 0.0)) throw std::domain_error("log_p_tau_at requires w > 0");
  return kLn2 + log_p_q_at(w, t, eta) - std::log(std::tanh(w));
}

double action_S(double Omega, double t, Rate eta) {
  if (!(t >= 0.0)) throw std::domain_error("action requires t >= 0");
  return Omega * Omega * t / (2.0 * eta.value()) - log_cosh(Omega * t);
}

ExtremaReport extremal_roots(double t, Rate eta) {
  require_positive_time(t);
  const double e = eta.value();
  ExtremaReport report{t, e, {}, e * t > 1.0};
  if (!report.above_threshold) {
    report.extrema.push_back({0.0, ExtremumKind::min});
    return report;
  }
  // f(x) = x/eta - tanh(x t) < 0 just above 0 and > 0 at eta.
  auto f = [&](double x) { return x / e - std::tanh(x * t); };
  double lo = 1e-15 * e;
  double hi = e;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  report.extrema = {{-root, ExtremumKind::min}, {0.0, ExtremumKind::max}, {root, ExtremumKind::min}};
  return report;
}

double omega_cutoff(double t, Rate eta) {
  require_positive_time(t);
  return eta.value() + 12.0 * std::sqrt(eta.value() / t);
}

double mean_q_squared(double t, Rate eta) {
  if (t < 0.0) throw std::domain_error("mean purity requires t >= 0");
  if (t == 0.0) return 0.0;
  const double cut = omega_cutoff(t, eta);
  auto f = [&](double w) {
    const double q = std::tanh(w * t);
    return q * q * p_Omega(w, t, eta);
  };
  return 2.0 * integrate_pieces(f, {0.0, eta.value(), cut});
}

double mean_purity(double t, Rate eta) { return 0.5 + 0.5 * mean_q_squared(t, eta); }

FokkerPlanckTerms fokker_planck_terms(double Q, double t, Rate eta) {
  require_positive_time(t);
  const double e = eta.value();
  const double q_tanh = Q * std::tanh(Q);
  const double quad = Q * Q / (2.0 * e * t * t);
  return FokkerPlanckTerms{
      quad - 0.5 / t - 0.5 * e,
      q_tanh / t - e,
      -q_tanh / t + 0.5 * e - 0.5 / t + quad,
  };
}

double fokker_planck_residual(double Q, double t, Rate eta) {
  const FokkerPlanckTerms terms = fokker_planck_terms(Q, t, eta);
  return terms.time_derivative - (terms.drift + terms.diffusion);
}

std::string_view to_string(DensityKind k) noexcept {
  switch (k) {
    case DensityKind::P_Q: return "P_Q";
    case DensityKind::P_Omega: return "P_Omega";
    case DensityKind::P_q: return "P_q";
    case DensityKind::P_tau: return "P_tau";
  }
  return "unknown";
}

std::optional<DensityKind> parse_density_kind(std::string_view s) noexcept {
  for (DensityKind k : {DensityKind::P_Q, DensityKind::P_Omega, DensityKind::P_q, DensityKind::P_tau})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

bool in_domain(DensityKind kind, double x) noexcept {
  switch (kind) {
    case DensityKind::P_Q:
    case DensityKind::P_Omega: return std::isfinite(x);
    case DensityKind::P_q: return std::abs(x) < 1.0;
    case DensityKind::P_tau: return x > 0.5 && x < 1.0;
  }
  return false;
}

double density(DensityKind kind, double x, double t, Rate eta) {
  switch (kind) {
    case DensityKind::P_Q: return p_Q(x, t, eta);
    case DensityKind::P_Omega: return p_Omega(x, t, eta);
    case DensityKind::P_q: return p_q(x, t, eta);
    case DensityKind::P_tau: return p_tau(x, t, eta);
  }
  throw std::domain_error("unknown density");
}

double total_mass(DensityKind kind, double t, Rate eta) {
  const double cut = omega_cutoff(t, eta);
  const double e = eta.value();
  switch (kind) {
    case DensityKind::P_Q: {
      auto f = [&](double Q) { return p_Q(Q, t, eta); };
      return integrate_pieces(f, {-cut * t, -e * t, 0.0, e * t, cut * t});
    }
    case DensityKind::P_Omega: {
      auto f = [&](double w) { return p_Omega(w, t, eta); };
      return integrate_pieces(f, {-cut, -e, 0.0, e, cut});
    }
    case DensityKind::P_q: {
      // dq = t sech^2(Omega t) dOmega
      auto f = [&](double w) {
        const double x = w * t;
        return std::exp(log_p_q_at(x, t, eta) + std::log(t) - 2.0 * log_cosh(x));
      };
      return integrate_pieces(f, {-cut, -e, 0.0, e, cut});
    }
    case DensityKind::P_tau: {
      // dtau = tanh(Omega t) t sech^2(Omega t) dOmega, Omega > 0 (both signs folded into P_tau)
      auto f = [&](double w) {
        const double x = w * t;
        return std::exp(log_p_tau_at(x, t, eta) + std::log(std::tanh(x) * t) - 2.0 * log_cosh(x));
      };
      return integrate_pieces(f, {0.0, e, cut});
    }
  }
  throw std::domain_error("unknown density");
}

DensityCurve sample_density(DensityKind which, Rate eta, double t, std::span<const double> grid) {
  require_positive_time(t);
  DensityCurve curve{which, eta.value(), t, {}};
  curve.points.reserve(grid.size());
  for (double x : grid) {
    if (!in_domain(which, x)) {
      throw std::domain_error(std::string(to_string(which)) + " undefined at x = " + std::to_string(x));
    }
    curve.points.emplace_back(x, density(which, x, t, eta));
  }
  return curve;
}

}  // namespace qpurify
