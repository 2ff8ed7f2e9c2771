#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pcov/geometry.hpp"
#include "pcov/quadrature.hpp"
#include "pcov/trial_kernels.hpp"

namespace pcov {

enum class Method { hybrid, simulation, sg, probabilistic };

std::string_view method_name(Method m) noexcept;
/// Throws std::invalid_argument for unknown names.
Method parse_method(std::string_view name);

enum class Sampler { window, direct };

std::string_view sampler_name(Sampler s) noexcept;
Sampler parse_sampler(std::string_view name);

/// Algorithmic knobs shared by the Monte Carlo estimators.
struct EstimatorSettings {
  std::size_t dominant_count = 4;     // K
  std::size_t interferer_total = 10;  // N
  std::uint64_t trials = 50'000;      // M
  double quad_abs_tol = kDefaultQuadTol;
  std::uint64_t seed = 0;

  void validate() const;
};

/// SINR thresholds, kept in both dB and linear power ratio.
class ThresholdGrid {
public:
  ThresholdGrid() = default;
  /// Throws std::invalid_argument unless strictly increasing and finite.
  static ThresholdGrid from_db(std::vector<double> thresholds_db);
  /// tmin, tmin + step, ... up to tmax (inclusive, with 1e-9 step slack).
  static ThresholdGrid db_range(double tmin_db, double tmax_db, double step_db);
  static ThresholdGrid from_linear(std::vector<double> thresholds_linear);

  std::span<const double> db() const noexcept { return db_; }
  std::span<const double> linear() const noexcept { return linear_; }
  std::size_t size() const noexcept { return linear_.size(); }

private:
  std::vector<double> db_;
  std::vector<double> linear_;
};

double db_to_linear(double db) noexcept;

struct CoveragePoint {
  double threshold_db = 0.0;
  double threshold_linear = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials_used = 0;
};

struct CoverageCurve {
  Method method = Method::hybrid;
  double pathloss_exponent = 0.0;
  std::size_t interferer_total = 0; // N label
  std::size_t dominant_count = 0;   // K label
  std::vector<CoveragePoint> points;
};

/// Inputs of the moment-based Gaussian baseline. mu_S, sigma_S^2 and
/// sigma_0^2 come from outside this library; there are no defaults.
struct ProbModelParams {
  double mu_s = 0.0;
  double sigma_s_sq = 0.0;
  double sigma0_sq = 1.0;
  std::size_t interferer_total = 2;
};

/// Intermediate quantities of the baseline, exposed for inspection and tests.
struct ProbModelMoments {
  double beta = 0.0;          // sum_{i=2}^N alpha_i
  double mu_tilde = 0.0;      // noise-adjusted mean
  double sigma_tilde_sq = 0.0;
  bool valid = false;         // mu_tilde >= sigma_tilde / sqrt(2)
  double mu_u = 0.0;          // meaningful only when valid
  double sigma_u_sq = 0.0;
};

// ---------------------------------------------------------------------------
// Hybrid dominant-plus-tail estimator

/// Conditional coverage of one geometry at s = T r^eta:
///
///   exp(-s sigma^2) * prod_{i=2..K} 1 / (1 + s R_i^-eta)
///                   * exp(-2 pi lambda * int_{R_K}^{R_N} s t / (t^eta + s) dt)
///
/// `distances` is ascending with distances[0] = r and at least N entries.
/// With K = N the tail factor is exactly 1; with K = 1 the product is empty
/// and the tail starts at r.
double hybrid_sample_value(double s, std::span<const double> distances, std::size_t K,
                           std::size_t N, const NetworkConfig& cfg, double quad_abs_tol);

CoverageCurve hybrid_coverage(const NetworkConfig& cfg, const EstimatorSettings& est,
                              const ThresholdGrid& grid, Sampler sampler = Sampler::window,
                              const Execution& exec = {});

// ---------------------------------------------------------------------------
// Empirical Monte Carlo

struct EmpiricalOptions {
  Sampler sampler = Sampler::window;
  /// Interfere with every window point instead of the N - 1 nearest.
  bool all_window_interferers = false;
};

CoverageCurve empirical_coverage(const NetworkConfig& cfg, const EstimatorSettings& est,
                                 const ThresholdGrid& grid, const EmpiricalOptions& opts = {},
                                 const Execution& exec = {});

// ---------------------------------------------------------------------------
// Infinite-network benchmark

/// Coverage of the infinite PPP by nested adaptive quadrature. Needs eta > 2.
CoverageCurve sg_coverage(const NetworkConfig& cfg, const ThresholdGrid& grid,
                          double quad_abs_tol = kDefaultQuadTol);

/// Single-threshold form of sg_coverage.
double sg_coverage_at(const NetworkConfig& cfg, double threshold_linear,
                      double quad_abs_tol = kDefaultQuadTol);

// ---------------------------------------------------------------------------
// Moment-based Gaussian baseline (eta = 4 only)

double alpha_coefficient(std::size_t i, double bs_density);

ProbModelMoments prob_model_moments(const ProbModelParams& params, const NetworkConfig& cfg);

CoverageCurve prob_model_coverage(const ProbModelParams& params, const NetworkConfig& cfg,
                                  const ThresholdGrid& grid);

} // namespace pcov
