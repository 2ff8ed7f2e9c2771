#include "pcov/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pcov/errors.hpp"
#include "pcov/rng.hpp"

namespace pcov {

std::string_view method_name(Method m) noexcept {
  switch (m) {
  case Method::hybrid: return "hybrid";
  case Method::simulation: return "simulation";
  case Method::sg: return "sg";
  case Method::probabilistic: return "probabilistic";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::hybrid, Method::simulation, Method::sg, Method::probabilistic}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected hybrid, simulation, sg or probabilistic)");
}

std::string_view sampler_name(Sampler s) noexcept {
  return s == Sampler::window ? "window" : "direct";
}

Sampler parse_sampler(std::string_view name) {
  if (name == "window") return Sampler::window;
  if (name == "direct") return Sampler::direct;
  throw std::invalid_argument("unknown sampler '" + std::string(name) +
                              "' (expected window or direct)");
}

void EstimatorSettings::validate() const {
  if (dominant_count < 1) throw std::invalid_argument("K must be >= 1");
  if (interferer_total < dominant_count) {
    throw std::invalid_argument("N must be >= K (N=" + std::to_string(interferer_total) +
                                ", K=" + std::to_string(dominant_count) + ")");
  }
  if (trials < 1) throw std::invalid_argument("trial count M must be >= 1");
  if (!(quad_abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be > 0");
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

ThresholdGrid ThresholdGrid::from_db(std::vector<double> thresholds_db) {
  ThresholdGrid g;
  for (std::size_t j = 0; j < thresholds_db.size(); ++j) {
    if (!std::isfinite(thresholds_db[j])) throw std::invalid_argument("threshold must be finite");
    if (j > 0 && !(thresholds_db[j] > thresholds_db[j - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
    g.linear_.push_back(db_to_linear(thresholds_db[j]));
  }
  g.db_ = std::move(thresholds_db);
  return g;
}

ThresholdGrid ThresholdGrid::db_range(double tmin_db, double tmax_db, double step_db) {
  if (!std::isfinite(tmin_db) || !std::isfinite(tmax_db)) {
    throw std::invalid_argument("threshold range must be finite");
  }
  if (!(step_db > 0.0)) throw std::invalid_argument("threshold step must be > 0");
  if (tmax_db < tmin_db) throw std::invalid_argument("tmax must be >= tmin");
  const auto count = static_cast<std::size_t>(std::floor((tmax_db - tmin_db) / step_db + 1e-9)) + 1;
  std::vector<double> db(count);
  for (std::size_t j = 0; j < count; ++j) db[j] = tmin_db + static_cast<double>(j) * step_db;
  return from_db(std::move(db));
}

ThresholdGrid ThresholdGrid::from_linear(std::vector<double> thresholds_linear) {
  ThresholdGrid g;
  for (std::size_t j = 0; j < thresholds_linear.size(); ++j) {
    const double t = thresholds_linear[j];
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("linear thresholds must be finite and > 0");
    }
    if (j > 0 && !(t > thresholds_linear[j - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
    g.db_.push_back(10.0 * std::log10(t));
  }
  g.linear_ = std::move(thresholds_linear);
  return g;
}

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(const ThresholdGrid& grid) {
  if (grid.size() == 0) throw std::invalid_argument("threshold grid is empty");
}

void check_window_capacity(const NetworkConfig& cfg, std::size_t n) {
  if (cfg.expected_point_count() < static_cast<double>(n)) {
    throw std::invalid_argument("window holds lambda*(2L)^2 = " +
                                std::to_string(cfg.expected_point_count()) +
                                " points on average, fewer than N = " + std::to_string(n));
  }
}

CoverageCurve make_curve(Method m, const NetworkConfig& cfg, const EstimatorSettings& est,
                         const ThresholdGrid& grid) {
  CoverageCurve c;
  c.method = m;
  c.pathloss_exponent = cfg.pathloss_exponent;
  c.interferer_total = est.interferer_total;
  c.dominant_count = est.dominant_count;
  c.points.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    c.points[j].threshold_db = grid.db()[j];
    c.points[j].threshold_linear = grid.linear()[j];
  }
  return c;
}

// Nearest N distances for one trial; empty when the window came up short.
std::vector<double> draw_geometry(const NetworkConfig& cfg, std::size_t n, Sampler sampler,
                                  Engine& rng) {
  if (sampler == Sampler::direct) {
    return sample_ordered_distances_direct(cfg.bs_density, n, rng).distances;
  }
  return sample_window_nearest(cfg, n, rng).nearest;
}

// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace

// ---------------------------------------------------------------------------

double hybrid_sample_value(double s, std::span<const double> distances, std::size_t K,
                           std::size_t N, const NetworkConfig& cfg, double quad_abs_tol) {
  if (K < 1 || N < K) throw std::invalid_argument("hybrid value needs 1 <= K <= N");
  if (distances.size() < N) {
    throw std::invalid_argument("hybrid value needs at least N = " + std::to_string(N) +
                                " distances, got " + std::to_string(distances.size()));
  }
  if (!(s >= 0.0)) throw std::invalid_argument("hybrid value needs s >= 0");
  if (s == 0.0) return 1.0;

  const double eta = cfg.pathloss_exponent;
  double value = std::exp(-s * cfg.noise_power);
  for (std::size_t i = 1; i < K; ++i) {
    // 1 / (1 + s R^-eta) written without R^-eta
    const double r_eta = std::pow(distances[i], eta);
    value *= r_eta / (r_eta + s);
  }
  if (K < N && value > 0.0) {
    const double tail = tail_integral(s, eta, distances[K - 1], distances[N - 1], quad_abs_tol);
    value *= std::exp(-2.0 * kPi * cfg.bs_density * tail);
  }
  return std::clamp(value, 0.0, 1.0);
}

CoverageCurve hybrid_coverage(const NetworkConfig& cfg, const EstimatorSettings& est,
                              const ThresholdGrid& grid, Sampler sampler, const Execution& exec) {
  cfg.validate();
  est.validate();
  check_grid(grid);
  const std::size_t n = est.interferer_total;
  if (sampler == Sampler::window) check_window_capacity(cfg, n);

  const auto thresholds = grid.linear();
  auto trial = [&](std::uint64_t t, std::span<double> out) {
    Engine rng = make_engine(est.seed, StreamPurpose::geometry, n, t);
    const std::vector<double> d = draw_geometry(cfg, n, sampler, rng);
    if (d.empty()) return false; // too few points in the window: skip the trial
    const double r_eta = std::pow(d.front(), cfg.pathloss_exponent);
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      out[j] = hybrid_sample_value(thresholds[j] * r_eta, d, est.dominant_count, n, cfg,
                                   est.quad_abs_tol);
    }
    return true;
  };
  const TrialTotals totals = run_trials(est.trials, grid.size(), exec, trial);
  if (totals.trials_used == 0) {
    throw NumericalError("hybrid estimator retained no trials (every window held fewer than N=" +
                         std::to_string(n) + " points)");
  }

  CoverageCurve curve = make_curve(Method::hybrid, cfg, est, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    curve.points[j].estimate = std::clamp(totals.mean(j), 0.0, 1.0);
    curve.points[j].std_error = totals.standard_error(j);
    curve.points[j].trials_used = totals.trials_used;
  }
  return curve;
}

// ---------------------------------------------------------------------------

CoverageCurve empirical_coverage(const NetworkConfig& cfg, const EstimatorSettings& est,
                                 const ThresholdGrid& grid, const EmpiricalOptions& opts,
                                 const Execution& exec) {
  cfg.validate();
  est.validate();
  check_grid(grid);
  const std::size_t n = est.interferer_total;
  if (opts.all_window_interferers && opts.sampler != Sampler::window) {
    throw std::invalid_argument("all-window interference needs the window sampler");
  }
  if (opts.sampler == Sampler::window) check_window_capacity(cfg, n);

  const auto thresholds = grid.linear();
  const double eta = cfg.pathloss_exponent;
  auto trial = [&](std::uint64_t t, std::span<double> out) {
    Engine geo = make_engine(est.seed, StreamPurpose::geometry, n, t);
    std::vector<double> d;
    if (opts.all_window_interferers) {
      PppRealization full = sample_window_realization(cfg, geo);
      if (full.point_count < n) return false;
      d = std::move(full.distances);
    } else {
      d = draw_geometry(cfg, n, opts.sampler, geo);
      if (d.empty()) return false;
    }

    Engine fade = make_engine(est.seed, StreamPurpose::fading, n, t);
    const double signal = exponential(fade, 1.0) * std::pow(d[0], -eta);
    double interference = 0.0;
    for (std::size_t i = 1; i < d.size(); ++i) {
      interference += exponential(fade, 1.0) * std::pow(d[i], -eta);
    }
    const double floor = interference + cfg.noise_power;
    // SINR > T, compared without dividing so that a zero denominator means covered
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      out[j] = signal > thresholds[j] * floor ? 1.0 : 0.0;
    }
    return true;
  };
  const TrialTotals totals = run_trials(est.trials, grid.size(), exec, trial);
  if (totals.trials_used == 0) {
    throw NumericalError("empirical estimator retained no trials (every window held fewer than "
                         "N=" + std::to_string(n) + " points)");
  }

  CoverageCurve curve = make_curve(Method::simulation, cfg, est, grid);
  const double used = static_cast<double>(totals.trials_used);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double p = std::clamp(totals.mean(j), 0.0, 1.0);
    curve.points[j].estimate = p;
    curve.points[j].std_error = std::sqrt(p * (1.0 - p) / used);
    curve.points[j].trials_used = totals.trials_used;
  }
  return curve;
}

// ---------------------------------------------------------------------------

double sg_coverage_at(const NetworkConfig& cfg, double threshold_linear, double quad_abs_tol) {
  cfg.validate();
  const double eta = cfg.pathloss_exponent;
  if (!(eta > 2.0)) {
    throw std::invalid_argument("SG benchmark needs eta > 2 (interference of the infinite "
                                "network diverges otherwise), got eta = " + std::to_string(eta));
  }
  if (!(threshold_linear >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  if (!(quad_abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be > 0");

  const double lambda = cfg.bs_density;
  // Inner error e shifts the outer integrand by at most 2 pi lambda e times the
  // serving density, which integrates to one.
  const double inner_tol = quad_abs_tol / (4.0 * kPi * lambda);
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double density = 2.0 * kPi * lambda * r * std::exp(-kPi * lambda * r * r);
    if (density == 0.0) return 0.0;
    const double s = threshold_linear * std::pow(r, eta);
    const double noise = std::exp(-s * cfg.noise_power);
    if (noise == 0.0 || !std::isfinite(s)) return 0.0;
    const double tail = tail_integral(s, eta, r, std::numeric_limits<double>::infinity(), inner_tol);
    return noise * std::exp(-2.0 * kPi * lambda * tail) * density;
  };
  const Integral1D result = integrate_adaptive(integrand, 0.0,
                                               std::numeric_limits<double>::infinity(),
                                               0.5 * quad_abs_tol);
  return std::clamp(result.value, 0.0, 1.0);
}

CoverageCurve sg_coverage(const NetworkConfig& cfg, const ThresholdGrid& grid,
                          double quad_abs_tol) {
  check_grid(grid);
  CoverageCurve curve;
  curve.method = Method::sg;
  curve.pathloss_exponent = cfg.pathloss_exponent;
  curve.points.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto& p = curve.points[j];
    p.threshold_db = grid.db()[j];
    p.threshold_linear = grid.linear()[j];
    p.estimate = sg_coverage_at(cfg, p.threshold_linear, quad_abs_tol);
  }
  return curve;
}

// ---------------------------------------------------------------------------

double alpha_coefficient(std::size_t i, double bs_density) {
  if (i < 2) throw std::invalid_argument("alpha_i is defined for i >= 2");
  if (!(bs_density > 0.0)) throw std::invalid_argument("bs density must be > 0");
  const double pl = kPi * bs_density;
  const double scale = 1.0 / (pl * pl);
  if (i == 2) return scale * (67.0 - 96.0 * std::numbers::ln2);

  const double di = static_cast<double>(i);
  // 4!/Gamma(i) * (Gamma(i-2) - sum_{k=0}^{4} Gamma(i+k-2) / (k! 2^(i+k-2)))
  CompensatedSum first;
  first.add(1.0 / ((di - 1.0) * (di - 2.0))); // Gamma(i-2) / Gamma(i)
  const double lg_i = std::lgamma(di);
  for (int k = 0; k <= 4; ++k) {
    const double dk = k;
    const double log_term = std::lgamma(di + dk - 2.0) - lg_i - std::lgamma(dk + 1.0) -
                            (di + dk - 2.0) * std::numbers::ln2;
    first.add(-std::exp(log_term));
  }

  // Gamma(i+4)/Gamma(i) * (1 - ln 2 - sum_{k=0}^{i+1} k! / ((k+2)! 2^(k+1))).
  // The full series sum_{k>=0} 1/((k+1)(k+2) 2^(k+1)) equals 1 - ln 2, so the
  // bracket is the series remainder from k = i+2; summing that directly avoids
  // subtracting two nearly equal numbers.
  CompensatedSum remainder;
  double pow2 = std::ldexp(1.0, -static_cast<int>(i + 3)); // 2^-(k+1) at k = i+2
  for (std::size_t k = i + 2;; ++k, pow2 *= 0.5) {
    const double dk = static_cast<double>(k);
    const double term = pow2 / ((dk + 1.0) * (dk + 2.0));
    remainder.add(term);
    if (term < 1e-18 * remainder.value()) break;
  }
  const double rising = di * (di + 1.0) * (di + 2.0) * (di + 3.0);
  return scale * (24.0 * first.value() + rising * remainder.value());
}

ProbModelMoments prob_model_moments(const ProbModelParams& params, const NetworkConfig& cfg) {
  cfg.validate();
  if (cfg.pathloss_exponent != 4.0) {
    throw std::invalid_argument("probabilistic baseline is defined for eta = 4 only");
  }
  if (params.interferer_total < 2) throw std::invalid_argument("probabilistic baseline needs N >= 2");
  if (!std::isfinite(params.mu_s)) throw std::invalid_argument("mu_S must be finite");
  if (!(params.sigma_s_sq >= 0.0)) throw std::invalid_argument("sigma_S^2 must be >= 0");
  if (!(params.sigma0_sq > 0.0)) throw std::invalid_argument("sigma_0^2 must be > 0");

  const double pl2 = (kPi * cfg.bs_density) * (kPi * cfg.bs_density);
  const double noise = cfg.noise_power;
  ProbModelMoments m;
  CompensatedSum beta;
  for (std::size_t i = 2; i <= params.interferer_total; ++i) {
    beta.add(alpha_coefficient(i, cfg.bs_density));
  }
  m.beta = beta.value();
  m.mu_tilde = params.mu_s + 2.0 * noise / pl2;
  m.sigma_tilde_sq = params.sigma_s_sq + 20.0 * noise * noise / (pl2 * pl2) +
                     2.0 * noise * m.beta - 4.0 * noise * params.mu_s / pl2;
  m.valid = m.sigma_tilde_sq >= 0.0 && m.mu_tilde >= std::sqrt(m.sigma_tilde_sq / 2.0);
  if (m.valid) {
    const double disc = m.mu_tilde * m.mu_tilde - m.sigma_tilde_sq / 2.0;
    m.mu_u = std::pow(disc, 0.25);
    m.sigma_u_sq = std::max(0.0, m.mu_tilde - std::sqrt(disc));
  }
  return m;
}

CoverageCurve prob_model_coverage(const ProbModelParams& params, const NetworkConfig& cfg,
                                  const ThresholdGrid& grid) {
  check_grid(grid);
  const ProbModelMoments m = prob_model_moments(params, cfg);
  if (!m.valid) {
    throw ValidityError("probabilistic baseline invalid: needs mu~_S >= sigma~_S/sqrt(2), got "
                        "mu~_S = " + std::to_string(m.mu_tilde) + ", sigma~_S^2 = " +
                        std::to_string(m.sigma_tilde_sq));
  }
  CoverageCurve curve;
  curve.method = Method::probabilistic;
  curve.pathloss_exponent = cfg.pathloss_exponent;
  curve.interferer_total = params.interferer_total;
  curve.points.resize(grid.size());
  const double s0 = params.sigma0_sq;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto& p = curve.points[j];
    p.threshold_db = grid.db()[j];
    p.threshold_linear = grid.linear()[j];
    const double t = p.threshold_linear;
    const double spread = s0 + 2.0 * t * m.sigma_u_sq;
    p.estimate = std::clamp(std::sqrt(s0 / spread) * std::exp(-t * m.mu_u * m.mu_u / spread), 0.0,
                            1.0);
  }
  return curve;
}

} // namespace pcov
