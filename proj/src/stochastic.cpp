#include "omc/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace omc::stochastic {

namespace {

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be nonnegative and finite");
  }
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : gen_(seed), seed_(seed) {}

double RandomStream::uniform() {
  // Top 53 bits, shifted into (0, 1]: the +1 excludes 0 so that log() below
  // is always finite, and the maximum maps to exactly 1.
  return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::gaussian(double sigma) {
  require_nonneg(sigma, "gaussian: sigma");
  const double u1 = uniform();
  const double u2 = uniform();
  return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec2 RandomStream::gaussian_pair(double sigma) {
  require_nonneg(sigma, "gaussian_pair: sigma");
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = sigma * std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

double RandomStream::rayleigh(double sigma) {
  require_nonneg(sigma, "rayleigh: sigma");
  return sigma * std::sqrt(-2.0 * std::log(uniform()));
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(seed_ ^ splitmix64(index));
}

Vec2 sample_target_step(Vec2 prev, const MobilitySpec& mob, RandomStream& rng) {
  require_nonneg(mob.sigma_t, "mobility sigma_t");
  return prev + rng.gaussian_pair(mob.sigma_t);
}

Vec2 sample_pointing_offset(const PointingSpec& pt, RandomStream& rng) {
  require_nonneg(pt.sigma_p, "pointing sigma_p");
  const double r = rng.rayleigh(pt.sigma_p);
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

double sample_noise(const NoiseSpec& ns, RandomStream& rng) {
  require_nonneg(ns.sigma_n, "noise sigma_n");
  return rng.gaussian(ns.sigma_n);
}

}  // namespace omc::stochastic
