#include "qpurify/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "qpurify/collisional.hpp"
#include "qpurify/rng.hpp"

namespace qpurify {

IntegrationError::IntegrationError(std::size_t trajectory, long step, const std::string& what)
    : std::runtime_error("trajectory " + std::to_string(trajectory) + ", step " + std::to_string(step) + ": " +
                         what),
      trajectory_(trajectory),
      step_(step) {}

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::langevin_q: return "langevin_q";
    case Backend::langevin_Q: return "langevin_Q";
    case Backend::collisional: return "collisional";
  }
  return "unknown";
}

std::string_view to_string(BoundaryPolicy p) noexcept {
  return p == BoundaryPolicy::clamp ? "clamp" : "record_only";
}

std::optional<Backend> parse_backend(std::string_view s) noexcept {
  for (Backend b : {Backend::langevin_q, Backend::langevin_Q, Backend::collisional})
    if (s == to_string(b)) return b;
  return std::nullopt;
}

std::optional<BoundaryPolicy> parse_boundary_policy(std::string_view s) noexcept {
  for (BoundaryPolicy p : {BoundaryPolicy::record_only, BoundaryPolicy::clamp})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

std::vector<std::string> validate(const SimConfig& c) {
  if (!(c.eta > 0.0) || !std::isfinite(c.eta)) throw ConfigError("eta must be positive");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("dt must be positive");
  if (c.n_steps < 0) throw ConfigError("steps must be non-negative");
  if (c.n_traj < 1) throw ConfigError("traj must be at least 1");
  const double t_end = static_cast<double>(c.n_steps) * c.dt;
  for (double t : c.snapshot_times) {
    if (!std::isfinite(t) || t < 0.0 || t > t_end + 1e-9 * c.dt) {
      std::ostringstream os;
      os << "snapshot time " << t << " outside [0, " << t_end << "]";
      throw ConfigError(os.str());
    }
  }
  std::vector<std::string> warnings;
  if (c.eta * c.dt > 0.1) {
    std::ostringstream os;
    os << "eta*dt = " << c.eta * c.dt << " exceeds 0.1; Euler-Maruyama steps are coarse";
    warnings.push_back(os.str());
  }
  return warnings;
}

long snapshot_step(const SimConfig& c, double time) {
  return static_cast<long>(std::llround(time / c.dt));
}

double em_step_Q(double Q, double eta, double dt, double dW) noexcept {
  return Q + eta * std::tanh(Q) * dt + dW;
}

namespace {

struct SnapshotPlan {
  std::vector<long> steps;          // per requested snapshot
  std::vector<std::size_t> order;   // snapshot indices sorted by step
  long last_step = 0;
};

SnapshotPlan plan_snapshots(const SimConfig& c, const std::vector<double>& times) {
  SnapshotPlan plan;
  for (double t : times) plan.steps.push_back(snapshot_step(c, t));
  plan.order.resize(times.size());
  std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
  std::stable_sort(plan.order.begin(), plan.order.end(),
                   [&](std::size_t a, std::size_t b) { return plan.steps[a] < plan.steps[b]; });
  plan.last_step = plan.steps.empty() ? 0 : plan.steps[plan.order.back()];
  return plan;
}

// Integrates one trajectory, writing its value at each planned step.
class TrajectoryRunner {
 public:
  TrajectoryRunner(const SimConfig& c, const SnapshotPlan& plan, std::vector<EnsembleSnapshot>& out,
                   std::vector<std::atomic<long>>& excursions)
      : c_(c), plan_(plan), out_(out), excursions_(excursions), sigma_(std::sqrt(c.eta * c.dt)) {}

  void run(std::size_t traj) {
    RngStream rng = RngStream::for_trajectory(c_.master_seed, traj);
    switch (c_.backend) {
      case Backend::langevin_q: run_q(traj, rng); break;
      case Backend::langevin_Q: run_Q(traj, rng); break;
      case Backend::collisional: run_collisional(traj, rng); break;
    }
  }

 private:
  template <class Record>
  void emit(long step, std::size_t& next, Record&& record) {
    while (next < plan_.order.size() && plan_.steps[plan_.order[next]] == step) {
      record(plan_.order[next]);
      ++next;
    }
  }

  void run_q(std::size_t traj, RngStream& rng) {
    double q = 0.0;
    bool left = false;
    std::size_t next = 0;
    auto record = [&](std::size_t s) {
      out_[s].values[traj] = q;
      if (left) excursions_[s].fetch_add(1, std::memory_order_relaxed);
    };
    emit(0, next, record);
    for (long n = 1; n <= plan_.last_step; ++n) {
      q = em_step_q(q, sigma_ * rng.gaussian());
      if (!std::isfinite(q)) throw IntegrationError(traj, n, "non-finite q");
      if (std::abs(q) > 1.0) {
        left = true;
        if (c_.boundary_policy == BoundaryPolicy::clamp) q = std::clamp(q, -1.0, 1.0);
      }
      emit(n, next, record);
    }
  }

  void run_Q(std::size_t traj, RngStream& rng) {
    double Q = 0.0;
    std::size_t next = 0;
    auto record = [&](std::size_t s) { out_[s].values[traj] = std::clamp(Q, -kQReportCap, kQReportCap); };
    emit(0, next, record);
    for (long n = 1; n <= plan_.last_step; ++n) {
      Q = em_step_Q(Q, c_.eta, c_.dt, sigma_ * rng.gaussian());
      if (!std::isfinite(Q)) throw IntegrationError(traj, n, "non-finite Q");
      emit(n, next, record);
    }
  }

  void run_collisional(std::size_t traj, RngStream& rng) {
    CollisionalWalker walker(Rate(c_.eta), c_.dt);
    std::size_t next = 0;
    auto record = [&](std::size_t s) { out_[s].values[traj] = walker.q(); };
    emit(0, next, record);
    for (long n = 1; n <= plan_.last_step; ++n) {
      walker.advance(rng);
      emit(n, next, record);
    }
  }

  const SimConfig& c_;
  const SnapshotPlan& plan_;
  std::vector<EnsembleSnapshot>& out_;
  std::vector<std::atomic<long>>& excursions_;
  double sigma_;
};

}  // namespace

std::vector<EnsembleSnapshot> run_ensemble(const SimConfig& config) {
  validate(config);
  std::vector<double> times = config.snapshot_times;
  if (times.empty()) times.push_back(static_cast<double>(config.n_steps) * config.dt);
  const SnapshotPlan plan = plan_snapshots(config, times);

  const auto n_traj = static_cast<std::size_t>(config.n_traj);
  std::vector<EnsembleSnapshot> out(times.size());
  for (std::size_t s = 0; s < times.size(); ++s) {
    out[s].time = times[s];
    out[s].step = plan.steps[s];
    out[s].backend = config.backend;
    out[s].values.assign(n_traj, 0.0);
  }
  std::vector<std::atomic<long>> excursions(times.size());

  unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  constexpr std::size_t kChunk = 256;
  const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks));

  std::atomic<std::size_t> next_chunk{0};
  std::mutex failure_mutex;
  std::size_t failed_traj = n_traj;
  std::exception_ptr failure;

  auto work = [&] {
    TrajectoryRunner runner(config, plan, out, excursions);
    for (std::size_t chunk; (chunk = next_chunk.fetch_add(1)) < n_chunks;) {
      const std::size_t end = std::min(n_traj, (chunk + 1) * kChunk);
      for (std::size_t i = chunk * kChunk; i < end; ++i) {
        try {
          runner.run(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (i < failed_traj) {
            failed_traj = i;
            failure = std::current_exception();
          }
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t s = 0; s < out.size(); ++s) out[s].excursion_count = excursions[s].load();
  return out;
}

}  // namespace qpurify
