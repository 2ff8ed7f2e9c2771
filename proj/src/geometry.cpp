#include "pcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pcov {

void NetworkConfig::validate() const {
  if (!(bs_density > 0.0) || !std::isfinite(bs_density)) {
    throw std::invalid_argument("bs density must be finite and > 0, got " +
                                std::to_string(bs_density));
  }
  if (!(pathloss_exponent > 0.0) || !std::isfinite(pathloss_exponent)) {
    throw std::invalid_argument("path-loss exponent must be finite and > 0, got " +
                                std::to_string(pathloss_exponent));
  }
  if (!(noise_power >= 0.0) || !std::isfinite(noise_power)) {
    throw std::invalid_argument("noise power must be finite and >= 0, got " +
                                std::to_string(noise_power));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("window half-width must be finite and > 0, got " +
                                std::to_string(half_width));
  }
}

namespace {

// Squared distances of a fresh window draw, in generation order.
std::vector<double> draw_window_squared(const NetworkConfig& cfg, Engine& rng) {
  std::poisson_distribution<std::int64_t> count_dist(cfg.expected_point_count());
  const auto n = static_cast<std::size_t>(count_dist(rng));
  const double lo = -cfg.half_width, hi = cfg.half_width;
  std::vector<double> sq(n);
  for (auto& d2 : sq) {
    const double x = uniform(rng, lo, hi);
    const double y = uniform(rng, lo, hi);
    d2 = x * x + y * y;
  }
  return sq;
}

} // namespace

PppRealization sample_window_realization(const NetworkConfig& cfg, Engine& rng) {
  std::vector<double> sq = draw_window_squared(cfg, rng);
  std::stable_sort(sq.begin(), sq.end());
  PppRealization out;
  out.point_count = sq.size();
  out.distances.reserve(sq.size());
  for (double d2 : sq) out.distances.push_back(std::sqrt(d2));
  return out;
}

NearestDraw sample_window_nearest(const NetworkConfig& cfg, std::size_t count, Engine& rng) {
  std::poisson_distribution<std::int64_t> count_dist(cfg.expected_point_count());
  const auto n = static_cast<std::size_t>(count_dist(rng));
  NearestDraw out;
  out.point_count = n;
  if (count == 0 || n < count) return out;

  // Points inside a disk expected to hold count + 6 sqrt(count) + 20 points
  // are kept aside. When the disk holds at least `count` of them, the nearest
  // `count` overall are among them and selection only touches that subset.
  const double c = static_cast<double>(count);
  const double cutoff_sq = (c + 6.0 * std::sqrt(c) + 20.0) / (std::numbers::pi * cfg.bs_density);
  const double lo = -cfg.half_width, hi = cfg.half_width;
  std::vector<double> all(n);
  std::vector<double> inside;
  inside.reserve(2 * count + 64);
  for (auto& d2 : all) {
    const double x = uniform(rng, lo, hi);
    const double y = uniform(rng, lo, hi);
    d2 = x * x + y * y;
    if (d2 <= cutoff_sq) inside.push_back(d2);
  }
  std::vector<double>& pool = inside.size() >= count ? inside : all;
  const auto mid = pool.begin() + static_cast<std::ptrdiff_t>(count);
  std::nth_element(pool.begin(), mid - 1, pool.end());
  std::sort(pool.begin(), mid);
  out.nearest.reserve(count);
  for (auto it = pool.begin(); it != mid; ++it) out.nearest.push_back(std::sqrt(*it));
  return out;
}

PppRealization sample_ordered_distances_direct(double bs_density, std::size_t count,
                                               Engine& rng) {
  if (!(bs_density > 0.0) || !std::isfinite(bs_density)) {
    throw std::invalid_argument("bs density must be finite and > 0");
  }
  if (count == 0) throw std::invalid_argument("direct sampler needs count >= 1");
  const double mean_step = 1.0 / (std::numbers::pi * bs_density);
  PppRealization out;
  out.point_count = count;
  out.distances.reserve(count);
  double sq = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sq += exponential(rng, mean_step);
    out.distances.push_back(std::sqrt(sq));
  }
  return out;
}

double serving_distance_density(double r, double bs_density) {
  if (!(bs_density > 0.0)) throw std::invalid_argument("bs density must be > 0");
  if (!(r >= 0.0)) throw std::invalid_argument("distance must be >= 0");
  const double pl = std::numbers::pi * bs_density;
  return 2.0 * pl * r * std::exp(-pl * r * r);
}

} // namespace pcov
