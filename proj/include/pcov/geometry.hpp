#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pcov/rng.hpp"

namespace pcov {

/// Physical scenario. Distances in km, density in BS/km^2.
struct NetworkConfig {
  double bs_density = 1.0;        // lambda
  double pathloss_exponent = 4.0; // eta
  double noise_power = 0.1;       // sigma^2, linear
  double half_width = 40.0;       // L; the window is [-L, L]^2

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  double window_area() const noexcept { return 4.0 * half_width * half_width; }
  double expected_point_count() const noexcept { return bs_density * window_area(); }
};

/// One spatial draw: distances from the origin to every BS, ascending.
struct PppRealization {
  std::vector<double> distances;
  std::size_t point_count = 0;
};

/// The `count` nearest distances of a window draw, plus how many points the
/// window held. `nearest` is empty when the window held fewer than `count`.
struct NearestDraw {
  std::vector<double> nearest;
  std::size_t point_count = 0;

  bool sufficient() const noexcept { return !nearest.empty(); }
};

/// Poisson(lambda (2L)^2) points uniform on [-L, L]^2, all distances sorted.
PppRealization sample_window_realization(const NetworkConfig& cfg, Engine& rng);

/// Same random draws as sample_window_realization, but only the sorted
/// prefix of length `count` is materialized (partial selection). The result
/// equals the first `count` entries of the full realization drawn from an
/// identically seeded engine.
NearestDraw sample_window_nearest(const NetworkConfig& cfg, std::size_t count, Engine& rng);

/// Window-free ordered distances: squared distances are cumulative sums of
/// Exponential(mean 1/(pi lambda)) increments, so R_i^2 ~ Gamma(i, 1/(pi lambda)).
PppRealization sample_ordered_distances_direct(double bs_density, std::size_t count,
                                               Engine& rng);

/// Density of the nearest-BS distance, 2 pi lambda r exp(-pi lambda r^2).
double serving_distance_density(double r, double bs_density);

} // namespace pcov
