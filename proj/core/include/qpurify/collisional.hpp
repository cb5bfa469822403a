#pragma once

// Collisional model of continuous monitoring: the system qubit meets a fresh
// ancilla |phi> = (|0> - i|1>)/sqrt(2), the pair evolves under
// U = Z_S(theta) U_CNOT(theta), and the ancilla is measured projectively in
// {|0>, |1>}. With theta = sqrt(eta dt) the record converges to diffusive
// monitoring of sigma_z.
//
// Two-qubit basis ordering is |s a> -> index 2 s + a (system major). The
// CNOT uses the system as control and the ancilla as target.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "qpurify/qubit.hpp"
#include "qpurify/rng.hpp"

namespace qpurify {

class DegenerateBranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AncillaState {
  Eigen::Vector2cd amplitudes;
};

struct CollisionUnitary {
  Eigen::Matrix4cd matrix;
  double theta = 0.0;
};

struct Outcome {
  int bit = 0;
  /// Born probability of the selected branch.
  double probability = 0.0;
  /// Born probabilities of both branches, indexed by bit.
  std::array<double, 2> branch{};
};

struct CollisionResult {
  DensityMatrix state;
  Outcome outcome;
};

AncillaState make_ancilla();

/// Z_S(theta) (cos(theta) I - i sin(theta) CNOT), Z_S(theta) = exp(i theta sigma_z / 2) (x) 1.
CollisionUnitary make_unitary(double theta);

/// Applies one collision to rho and samples the ancilla outcome: bit 0 is
/// selected when u < p0. Throws DegenerateBranchError if the selected
/// branch has probability below 1e-15.
CollisionResult collision_step(const DensityMatrix& rho, const CollisionUnitary& unitary, double u);
CollisionResult collision_step(const DensityMatrix& rho, double theta, double u);

/// Repeated collisions on one trajectory with a precomputed unitary.
class CollisionalWalker {
 public:
  CollisionalWalker(Rate eta, double dt, double q0 = 0.0);

  /// One collision; returns the updated q.
  double advance(RngStream& rng);

  double q() const noexcept { return q_; }
  const DensityMatrix& state() const noexcept { return rho_; }
  double theta() const noexcept { return unitary_.theta; }

 private:
  CollisionUnitary unitary_;
  DensityMatrix rho_;
  double q_;
};

/// q after each collision, starting with q0 (n_steps + 1 values). The
/// random stream is RngStream(seed).
std::vector<double> run_collisional_trajectory(Rate eta, double dt, int n_steps, std::uint64_t seed,
                                               double q0 = 0.0);

}  // namespace qpurify
