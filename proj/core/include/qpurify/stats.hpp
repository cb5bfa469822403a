#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpurify/analytic.hpp"
#include "qpurify/qubit.hpp"
#include "qpurify/sde.hpp"

namespace qpurify {

/// Counts over bins [e_i, e_{i+1}); the last bin also takes x == e_last.
/// Samples outside the edges (and non-finite samples) go to below/above.
struct Histogram {
  std::vector<double> edges;
  std::vector<long> counts;
  long below = 0;
  long above = 0;

  long in_range() const noexcept;
  long total() const noexcept { return in_range() + below + above; }
  /// counts / (total * width); integrates to the in-range fraction.
  std::vector<double> density() const;
  /// Adds another histogram over identical edges.
  Histogram& merge(const Histogram& other);
};

std::vector<double> uniform_edges(double lo, double hi, int bins);

/// Throws ConfigError unless edges are strictly increasing with >= 2 entries.
Histogram build_histogram(std::span<const double> samples, std::span<const double> edges);

/// Default bins: 101 over [-1, 1] for q, 100 over [1/2, 1] for tau, 101 over
/// the quadrature truncation for Q and Omega.
std::vector<double> default_edges(DensityKind which, double t, Rate eta);

/// CDF of one of the analytic densities. F_Omega is tabulated on a uniform
/// grid over the truncated support by piecewise adaptive quadrature and
/// linearly interpolated; the other variables map monotonically onto Omega.
class AnalyticCdf {
 public:
  AnalyticCdf(DensityKind which, Rate eta, double t, int nodes = 4096);

  double operator()(double x) const;
  double omega_cdf(double omega) const;

  DensityKind which() const noexcept { return which_; }
  double time() const noexcept { return t_; }
  double eta() const noexcept { return eta_; }

 private:
  DensityKind which_;
  double eta_;
  double t_;
  double lo_;
  double step_;
  std::vector<double> table_;
};

/// sup_x |F_n(x) - F(x)| for the empirical CDF F_n of samples.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// sum over bins of |empirical mass - analytic mass|, including the mass
/// outside the edges. In [0, 2].
double l1_distance(const Histogram& hist, const std::function<double(double)>& cdf);

struct MomentRow {
  std::string name;
  double empirical;
  double analytic;
  double stderr_;
};

struct ComparisonReport {
  double time = 0.0;
  double eta = 1.0;
  std::string backend;
  std::string which;
  std::optional<double> ks_statistic;
  std::optional<double> l1_distance;
  long n_samples = 0;
  /// Samples outside the histogram range (or |q| > 1).
  long out_of_range = 0;
  std::vector<MomentRow> moment_table;

  const MomentRow* moment(const std::string& name) const;
};

/// Snapshot values as samples of the variable of `which` (q, tau, Q or Omega).
std::vector<double> samples_as(DensityKind which, const EnsembleSnapshot& snapshot);

/// Moments of q and tau against their analytic values: mean_q (0),
/// mean_tau (mean_purity), var_q (E[q^2] by quadrature).
ComparisonReport moment_report(const EnsembleSnapshot& snapshot, Rate eta);

/// moment_report plus KS and L1 against the analytic density `which`.
ComparisonReport compare_snapshot(const EnsembleSnapshot& snapshot, DensityKind which, Rate eta);

}  // namespace qpurify
