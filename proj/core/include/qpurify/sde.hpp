#pragma once

// Euler-Maruyama ensembles for the monitored qubit in two equivalent forms:
//   q-form:  dq = (1 - q^2) dW                 (multiplicative noise)
//   Q-form:  dQ = eta tanh(Q) dt + dW,  Q = atanh q   (additive noise)
// with <dW> = 0 and dW^2 = eta dt, plus the collisional backend.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpurify/qubit.hpp"

namespace qpurify {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// NaN or Inf produced by a trajectory.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(std::size_t trajectory, long step, const std::string& what);
  std::size_t trajectory() const noexcept { return trajectory_; }
  long step() const noexcept { return step_; }

 private:
  std::size_t trajectory_;
  long step_;
};

enum class Backend { langevin_q, langevin_Q, collisional };
enum class BoundaryPolicy { record_only, clamp };

std::string_view to_string(Backend b) noexcept;
std::string_view to_string(BoundaryPolicy p) noexcept;
std::optional<Backend> parse_backend(std::string_view s) noexcept;
std::optional<BoundaryPolicy> parse_boundary_policy(std::string_view s) noexcept;

/// True for backends whose native variable is q (not Q).
inline bool samples_q(Backend b) noexcept { return b != Backend::langevin_Q; }

/// |Q| beyond this is reported as +-kQReportCap; tanh is already saturated.
inline constexpr double kQReportCap = 700.0;

struct SimConfig {
  double eta = 1.0;
  double dt = 1e-3;
  long n_steps = 2000;
  long n_traj = 1000;
  std::uint64_t master_seed = 1;
  Backend backend = Backend::langevin_q;
  std::vector<double> snapshot_times{};
  BoundaryPolicy boundary_policy = BoundaryPolicy::record_only;
  /// Worker cap; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;
};

/// Throws ConfigError on invalid configs. Returns warnings (eta*dt > 0.1).
std::vector<std::string> validate(const SimConfig& config);

/// Step index for a snapshot time (nearest multiple of dt).
long snapshot_step(const SimConfig& config, double time);

struct EnsembleSnapshot {
  double time = 0.0;
  long step = 0;
  Backend backend = Backend::langevin_q;
  /// q for q-form and collisional backends, Q for langevin_Q.
  std::vector<double> values;
  /// Trajectories that left [-1, 1] at or before this step (q-form only).
  long excursion_count = 0;
};

/// q + (1 - q^2) dW; no clamping.
inline double em_step_q(double q, double dW) noexcept { return q + (1.0 - q * q) * dW; }

double em_step_Q(double Q, double eta, double dt, double dW) noexcept;

/// Runs config.n_traj independent trajectories from q0 = 0 and records the
/// requested snapshots, in the order given. Trajectory i draws from
/// RngStream::for_trajectory(master_seed, i), so output is bit-identical for
/// any thread count. Throws IntegrationError (lowest failing trajectory) on
/// non-finite values.
std::vector<EnsembleSnapshot> run_ensemble(const SimConfig& config);

}  // namespace qpurify
