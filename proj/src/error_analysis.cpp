#include "pcov/error_analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pcov/rng.hpp"

namespace pcov {

namespace {

void require_convergent(double eta) {
  if (!(eta > 2.0)) {
    throw std::invalid_argument("truncation error needs eta > 2, got eta = " +
                                std::to_string(eta));
  }
}

} // namespace

double delta_n(double s, double r_n, double bs_density, double eta, double quad_abs_tol) {
  require_convergent(eta);
  if (!(r_n > 0.0)) throw std::invalid_argument("R_N must be > 0");
  if (!(bs_density > 0.0)) throw std::invalid_argument("bs density must be > 0");
  const double tail =
      tail_integral(s, eta, r_n, std::numeric_limits<double>::infinity(), quad_abs_tol);
  return -std::expm1(-2.0 * std::numbers::pi * bs_density * tail);
}

double delta_n_upper_bound(double s, double r_n, double bs_density, double eta) {
  require_convergent(eta);
  if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
  if (!(r_n > 0.0)) throw std::invalid_argument("R_N must be > 0");
  if (!(bs_density > 0.0)) throw std::invalid_argument("bs density must be > 0");
  return 2.0 * std::numbers::pi * bs_density * s * std::pow(r_n, 2.0 - eta) / (eta - 2.0);
}

DeltaEstimate expected_delta_n(const NetworkConfig& cfg, std::size_t interferer_total,
                               double threshold_linear, std::uint64_t trials, std::uint64_t seed,
                               double quad_abs_tol, const Execution& exec) {
  cfg.validate();
  const double eta = cfg.pathloss_exponent;
  require_convergent(eta);
  if (interferer_total < 2) throw std::invalid_argument("E[delta_N] needs N >= 2");
  if (!(threshold_linear >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  if (trials < 1) throw std::invalid_argument("trial count must be >= 1");

  const double lambda = cfg.bs_density;
  auto trial = [&](std::uint64_t t, std::span<double> out) {
    Engine rng = make_engine(seed, StreamPurpose::tail_error, interferer_total, t);
    const PppRealization draw = sample_ordered_distances_direct(lambda, interferer_total, rng);
    const double r = draw.distances.front();
    const double r_n = draw.distances.back();
    const double s = threshold_linear * std::pow(r, eta);
    out[0] = delta_n(s, r_n, lambda, eta, quad_abs_tol);
    out[1] = delta_n_upper_bound(s, r_n, lambda, eta);
    return true;
  };
  const TrialTotals totals = run_trials(trials, 2, exec, trial);
  return {totals.mean(0), totals.standard_error(0), totals.mean(1), totals.trials_used};
}

double convergence_slope(std::span<const std::size_t> counts, std::span<const double> means) {
  if (counts.size() != means.size()) throw std::invalid_argument("counts and means differ in length");
  if (counts.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  const double n = static_cast<double>(counts.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) throw std::invalid_argument("counts must be positive");
    if (!(means[i] > 0.0)) throw std::invalid_argument("means must be positive for a log-log fit");
    sx += std::log(static_cast<double>(counts[i]));
    sy += std::log(means[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double dx = std::log(static_cast<double>(counts[i])) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(means[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs at least two distinct counts");
  return sxy / sxx;
}

TailErrorReport tail_error_report(const NetworkConfig& cfg, std::span<const std::size_t> counts,
                                  double threshold_linear, std::uint64_t trials,
                                  std::uint64_t seed, double quad_abs_tol, const Execution& exec) {
  TailErrorReport report;
  std::vector<double> means;
  for (std::size_t n : counts) {
    const DeltaEstimate d =
        expected_delta_n(cfg, n, threshold_linear, trials, seed, quad_abs_tol, exec);
    report.interferer_counts.push_back(n);
    report.delta_estimates.push_back(d);
    report.analytic_bounds.push_back(d.bound_mean);
    means.push_back(d.mean);
  }
  report.fitted_slope = convergence_slope(report.interferer_counts, means);
  return report;
}

} // namespace pcov
