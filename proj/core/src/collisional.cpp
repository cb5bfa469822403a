#include "qpurify/collisional.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace qpurify {

namespace {

using cd = std::complex<double>;
constexpr double kMinBranchProbability = 1e-15;

Eigen::Matrix4cd cnot_system_control() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.0;  // |00> -> |00>
  m(1, 1) = 1.0;  // |01> -> |01>
  m(3, 2) = 1.0;  // |10> -> |11>
  m(2, 3) = 1.0;  // |11> -> |10>
  return m;
}

}  // namespace

AncillaState make_ancilla() {
  const double r = 1.0 / std::sqrt(2.0);
  return AncillaState{Eigen::Vector2cd(cd(r, 0.0), cd(0.0, -r))};
}

CollisionUnitary make_unitary(double theta) {
  const Eigen::Matrix4cd u_cnot =
      std::cos(theta) * Eigen::Matrix4cd::Identity() - cd(0.0, std::sin(theta)) * cnot_system_control();
  const cd up = std::polar(1.0, 0.5 * theta);
  const cd down = std::polar(1.0, -0.5 * theta);
  Eigen::Matrix4cd z = Eigen::Matrix4cd::Zero();
  z(0, 0) = up;
  z(1, 1) = up;
  z(2, 2) = down;
  z(3, 3) = down;
  return CollisionUnitary{z * u_cnot, theta};
}

CollisionResult collision_step(const DensityMatrix& rho, const CollisionUnitary& unitary, double u) {
  const Eigen::Vector2cd phi = make_ancilla().amplitudes;
  const Eigen::Matrix2cd ancilla = phi * phi.adjoint();
  const Eigen::Matrix2cd& sys = rho.entries();

  Eigen::Matrix4cd joint;
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) joint(2 * s + a, 2 * sp + ap) = sys(s, sp) * ancilla(a, ap);

  const Eigen::Matrix4cd evolved = unitary.matrix * joint * unitary.matrix.adjoint();

  std::array<Eigen::Matrix2cd, 2> blocks;
  std::array<double, 2> probs{};
  for (int k = 0; k < 2; ++k) {
    for (int s = 0; s < 2; ++s)
      for (int sp = 0; sp < 2; ++sp) blocks[k](s, sp) = evolved(2 * s + k, 2 * sp + k);
    probs[k] = blocks[k].trace().real();
  }

  const int bit = u < probs[0] ? 0 : 1;
  if (!(probs[bit] >= kMinBranchProbability)) {
    throw DegenerateBranchError("selected ancilla outcome " + std::to_string(bit) +
                                " has probability " + std::to_string(probs[bit]));
  }
  Eigen::Matrix2cd post = blocks[bit] / probs[bit];
  post = 0.5 * (post + post.adjoint()).eval();
  return CollisionResult{DensityMatrix(post), Outcome{bit, probs[bit], probs}};
}

CollisionResult collision_step(const DensityMatrix& rho, double theta, double u) {
  return collision_step(rho, make_unitary(theta), u);
}

CollisionalWalker::CollisionalWalker(Rate eta, double dt, double q0)
    : unitary_(make_unitary(std::sqrt(eta.value() * dt))), rho_(rho_from_q(StateCoord(q0))), q_(q0) {
  if (!(dt > 0.0)) throw std::domain_error("time step must be positive");
}

double CollisionalWalker::advance(RngStream& rng) {
  rho_ = collision_step(rho_, unitary_, rng.uniform()).state;
  q_ = q_from_rho(rho_).value();
  return q_;
}

std::vector<double> run_collisional_trajectory(Rate eta, double dt, int n_steps, std::uint64_t seed, double q0) {
  if (n_steps < 0) throw std::domain_error("n_steps must be non-negative");
  CollisionalWalker walker(eta, dt, q0);
  RngStream rng(seed);
  std::vector<double> qs;
  qs.reserve(static_cast<std::size_t>(n_steps) + 1);
  qs.push_back(walker.q());
  for (int n = 0; n < n_steps; ++n) qs.push_back(walker.advance(rng));
  return qs;
}

}  // namespace qpurify
