#include "qpurify/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpurify/quadrature.hpp"

namespace qpurify {

long Histogram::in_range() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

std::vector<double> Histogram::density() const {
  std::vector<double> d(counts.size(), 0.0);
  const long n = total();
  if (n == 0) return d;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d[i] = static_cast<double>(counts[i]) / (static_cast<double>(n) * (edges[i + 1] - edges[i]));
  }
  return d;
}

Histogram& Histogram::merge(const Histogram& other) {
  if (other.edges != edges) throw ConfigError("cannot merge histograms with different edges");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  below += other.below;
  above += other.above;
  return *this;
}

std::vector<double> uniform_edges(double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw ConfigError("uniform_edges needs bins >= 1 and hi > lo");
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
  e.back() = hi;
  return e;
}

Histogram build_histogram(std::span<const double> samples, std::span<const double> edges) {
  if (edges.size() < 2) throw ConfigError("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ConfigError("histogram edges must be strictly increasing");
  }
  Histogram h{std::vector<double>(edges.begin(), edges.end()), std::vector<long>(edges.size() - 1, 0), 0, 0};
  for (double x : samples) {
    if (x < edges.front()) {
      ++h.below;
    } else if (!(x <= edges.back())) {
      ++h.above;
    } else {
      auto it = std::upper_bound(edges.begin(), edges.end(), x);
      auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
      if (bin == h.counts.size()) --bin;
      ++h.counts[bin];
    }
  }
  return h;
}

std::vector<double> default_edges(DensityKind which, double t, Rate eta) {
  switch (which) {
    case DensityKind::P_q: return uniform_edges(-1.0, 1.0, 101);
    case DensityKind::P_tau: return uniform_edges(0.5, 1.0, 100);
    case DensityKind::P_Q: {
      const double cut = omega_cutoff(t, eta) * t;
      return uniform_edges(-cut, cut, 101);
    }
    case DensityKind::P_Omega: {
      const double cut = omega_cutoff(t, eta);
      return uniform_edges(-cut, cut, 101);
    }
  }
  throw ConfigError("unknown density");
}

AnalyticCdf::AnalyticCdf(DensityKind which, Rate eta, double t, int nodes)
    : which_(which), eta_(eta.value()), t_(t) {
  if (nodes < 2) throw ConfigError("CDF table needs at least two nodes");
  const double cut = omega_cutoff(t, eta);
  lo_ = -cut;
  step_ = 2.0 * cut / (nodes - 1);
  table_.resize(static_cast<std::size_t>(nodes));
  table_[0] = 0.0;
  auto f = [&](double w) { return p_Omega(w, t, eta); };
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  for (int i = 1; i < nodes; ++i) {
    const double a = lo_ + step_ * (i - 1);
    const double b = lo_ + step_ * i;
    table_[i] = table_[i - 1] + integrate(f, a, b, opts).value;
  }
}

double AnalyticCdf::omega_cdf(double omega) const {
  if (std::isnan(omega)) return std::numeric_limits<double>::quiet_NaN();
  const double pos = (omega - lo_) / step_;
  if (pos <= 0.0) return 0.0;
  const double last = static_cast<double>(table_.size() - 1);
  if (pos >= last) return std::min(1.0, table_.back());
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return std::clamp(table_[i] + frac * (table_[i + 1] - table_[i]), 0.0, 1.0);
}

double AnalyticCdf::operator()(double x) const {
  switch (which_) {
    case DensityKind::P_Omega: return omega_cdf(x);
    case DensityKind::P_Q: return omega_cdf(x / t_);
    case DensityKind::P_q:
      if (x <= -1.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return omega_cdf(std::atanh(x) / t_);
    case DensityKind::P_tau: {
      if (x <= 0.5) return 0.0;
      if (x >= 1.0) return 1.0;
      const double w = std::atanh(std::sqrt(2.0 * x - 1.0)) / t_;
      return std::max(0.0, omega_cdf(w) - omega_cdf(-w));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double l1_distance(const Histogram& hist, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(hist.total());
  if (n == 0.0) return 0.0;
  double prev = cdf(hist.edges.front());
  double sum = std::abs(static_cast<double>(hist.below) / n - prev);
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double next = cdf(hist.edges[i + 1]);
    sum += std::abs(static_cast<double>(hist.counts[i]) / n - (next - prev));
    prev = next;
  }
  sum += std::abs(static_cast<double>(hist.above) / n - (1.0 - prev));
  return sum;
}

const MomentRow* ComparisonReport::moment(const std::string& name) const {
  for (const auto& row : moment_table)
    if (row.name == name) return &row;
  return nullptr;
}

std::vector<double> samples_as(DensityKind which, const EnsembleSnapshot& snapshot) {
  std::vector<double> out;
  out.reserve(snapshot.values.size());
  const bool native_q = samples_q(snapshot.backend);
  for (double v : snapshot.values) {
    const double q = native_q ? v : std::tanh(v);
    switch (which) {
      case DensityKind::P_q: out.push_back(q); break;
      case DensityKind::P_tau: out.push_back(0.5 * (1.0 + q * q)); break;
      case DensityKind::P_Q: out.push_back(native_q ? std::atanh(v) : v); break;
      case DensityKind::P_Omega: out.push_back((native_q ? std::atanh(v) : v) / snapshot.time); break;
    }
  }
  return out;
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double fourth_central = 0.0;
};

Moments moments_of(std::span<const double> x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  for (double v : x) {
    const double d = v - m.mean;
    m.var += d * d;
    m.fourth_central += d * d * d * d;
  }
  m.var /= n;
  m.fourth_central /= n;
  return m;
}

}  // namespace

ComparisonReport moment_report(const EnsembleSnapshot& snapshot, Rate eta) {
  if (snapshot.values.empty()) throw ConfigError("snapshot has no samples");
  const auto q = samples_as(DensityKind::P_q, snapshot);
  const auto tau = samples_as(DensityKind::P_tau, snapshot);
  const double n = static_cast<double>(q.size());
  const Moments mq = moments_of(q);
  const Moments mt = moments_of(tau);

  ComparisonReport r;
  r.time = snapshot.time;
  r.eta = eta.value();
  r.backend = std::string(to_string(snapshot.backend));
  r.n_samples = static_cast<long>(q.size());
  r.out_of_range = std::count_if(q.begin(), q.end(), [](double v) { return !(std::abs(v) <= 1.0); });
  const double m2 = mean_q_squared(snapshot.time, eta);
  r.moment_table = {
      {"mean_q", mq.mean, 0.0, std::sqrt(mq.var / n)},
      {"mean_tau", mt.mean, 0.5 + 0.5 * m2, std::sqrt(mt.var / n)},
      {"var_q", mq.var, m2, std::sqrt(std::max(0.0, mq.fourth_central - mq.var * mq.var) / n)},
  };
  return r;
}

ComparisonReport compare_snapshot(const EnsembleSnapshot& snapshot, DensityKind which, Rate eta) {
  ComparisonReport r = moment_report(snapshot, eta);
  r.which = std::string(to_string(which));
  const AnalyticCdf cdf(which, eta, snapshot.time);
  const auto x = samples_as(which, snapshot);
  auto f = [&](double v) { return cdf(v); };
  r.ks_statistic = ks_distance(x, f);
  const Histogram h = build_histogram(x, default_edges(which, snapshot.time, eta));
  r.l1_distance = l1_distance(h, f);
  r.out_of_range = std::max(r.out_of_range, h.below + h.above);
  return r;
}

}  // namespace qpurify
