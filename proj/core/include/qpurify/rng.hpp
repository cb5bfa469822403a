#pragma once

#include <cstdint>
#include <random>

#include "qpurify/qubit.hpp"

namespace qpurify {

/// Mixes (master seed, stream index) into a 64-bit engine seed with the
/// SplitMix64 finalizer. Streams for distinct indices are decorrelated and
/// do not depend on which worker runs them.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Per-trajectory random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits. Normals use the Marsaglia polar
/// method with the spare variate cached, so a stream yields the same normals
/// on every conforming platform with a correctly rounded log/sqrt.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(derive_stream_seed(master_seed, index));
  }

  /// Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal.
  double gaussian() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Wiener increment with mean 0 and variance eta * dt.
double gen_increment(RngStream& rng, Rate eta, double dt) noexcept;

}  // namespace qpurify
