#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pcov/geometry.hpp"
#include "pcov/quadrature.hpp"
#include "pcov/trial_kernels.hpp"

namespace pcov {

/// Truncation error of cutting the PGFL tail at R_N:
///   1 - exp(-2 pi lambda int_{R_N}^inf s t / (t^eta + s) dt).
/// Needs eta > 2.
double delta_n(double s, double r_n, double bs_density, double eta,
               double quad_abs_tol = kDefaultQuadTol);

/// 2 pi lambda s R_N^(2 - eta) / (eta - 2), from 1 - e^-z <= z and
/// s t / (t^eta + s) <= s t^(1 - eta). Dominates delta_n pointwise.
double delta_n_upper_bound(double s, double r_n, double bs_density, double eta);

struct DeltaEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double bound_mean = 0.0; // sample mean of delta_n_upper_bound on the same draws
  std::uint64_t trials = 0;
};

/// Monte Carlo estimate of E_{r, R_N}[delta_N(T r^eta, R_N)] over joint
/// (r, R_N) draws from the window-free order-statistics sampler. Trial m uses
/// substream (seed, tail_error, N, m).
DeltaEstimate expected_delta_n(const NetworkConfig& cfg, std::size_t interferer_total,
                               double threshold_linear, std::uint64_t trials, std::uint64_t seed,
                               double quad_abs_tol = kDefaultQuadTol, const Execution& exec = {});

/// Least-squares slope of log(mean) against log(count). Needs >= 3 points,
/// positive counts and positive means.
double convergence_slope(std::span<const std::size_t> counts, std::span<const double> means);

struct TailErrorReport {
  std::vector<std::size_t> interferer_counts;
  std::vector<DeltaEstimate> delta_estimates;
  std::vector<double> analytic_bounds;
  double fitted_slope = 0.0;
};

/// expected_delta_n over each N in `counts`, plus the fitted decay slope.
TailErrorReport tail_error_report(const NetworkConfig& cfg, std::span<const std::size_t> counts,
                                  double threshold_linear, std::uint64_t trials,
                                  std::uint64_t seed, double quad_abs_tol = kDefaultQuadTol,
                                  const Execution& exec = {});

} // namespace pcov
