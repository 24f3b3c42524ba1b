#pragma once

// Random models of the environment: Brownian target steps, Rayleigh pointing
// error, and Gaussian measurement noise, drawn from a seedable stream.

#include <cstdint>
#include <random>

#include "omc/types.hpp"

namespace omc::stochastic {

/// Per-axis standard deviation of the target's Brownian step, meters.
struct MobilitySpec {
  double sigma_t = 0.0;
};

/// Rayleigh scale of the radial pointing error, meters.
struct PointingSpec {
  double sigma_p = 0.0;
};

/// Standard deviation of the measured-power noise, watts.
struct NoiseSpec {
  double sigma_n = 0.0;
};

/// Seedable random stream with a platform independent draw sequence.
///
/// The generator is std::mt19937_64, whose output is pinned bit for bit by
/// the language standard, and every distribution below is an explicit
/// inverse transform rather than an implementation defined adapter. Two
/// streams built from the same seed therefore produce bitwise identical
/// sequences on any conforming platform.
///
/// Draw accounting (part of the reproducibility contract): uniform() and
/// rayleigh() consume one generator word each; gaussian() and
/// gaussian_pair() consume two.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform draw on the half open interval (0, 1].
  double uniform();

  /// One draw from N(0, sigma^2) via the Box-Muller cosine leg.
  double gaussian(double sigma);

  /// Two independent N(0, sigma^2) components from one Box-Muller pair.
  Vec2 gaussian_pair(double sigma);

  /// Rayleigh(sigma) radius via the exact inverse CDF, sigma * sqrt(-2 ln U).
  double rayleigh(double sigma);

  /// Independent stream for a numbered substream. The sub-seed is
  /// seed ^ splitmix64(index), so trial streams are decorrelated from the
  /// master and from each other. Does not consume draws from this stream.
  RandomStream substream(std::uint64_t index) const;

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
};

/// Brownian step: prev plus an isotropic Gaussian increment with per-axis
/// standard deviation sigma_t. sigma_t = 0 returns prev exactly while still
/// consuming the same two draws, keeping streams aligned across parameter
/// sweeps.
Vec2 sample_target_step(Vec2 prev, const MobilitySpec& mob, RandomStream& rng);

/// Pointing offset with Rayleigh(sigma_p) radius and uniform angle, the
/// isotropic two axis sway that yields a Rayleigh radial error. Consumes two
/// draws regardless of sigma_p.
Vec2 sample_pointing_offset(const PointingSpec& pt, RandomStream& rng);

/// Zero mean Gaussian measurement noise, standard deviation sigma_n. The
/// consumer may see negative measured powers; clamping is the tracking
/// module's concern.
double sample_noise(const NoiseSpec& ns, RandomStream& rng);

}  // namespace omc::stochastic
