#include "pcov/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <tuple>

#include "pcov/errors.hpp"

namespace pcov {

void SweepSpec::validate() const {
  try {
    network.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (settings.trials < 1) throw UsageError("--trials must be >= 1");
  if (!(settings.quad_abs_tol > 0.0)) throw UsageError("--quad-tol must be > 0");
  if (grid.size() == 0) throw UsageError("threshold grid is empty");
  if (methods.empty()) throw UsageError("--methods must name at least one method");
  if (interferer_counts.empty()) throw UsageError("--N needs at least one value");
  if (dominant_counts.empty()) throw UsageError("--K needs at least one value");
  if (threads < 0) throw UsageError("--threads must be >= 0");

  const std::size_t min_n = *std::min_element(interferer_counts.begin(), interferer_counts.end());
  const std::size_t max_n = *std::max_element(interferer_counts.begin(), interferer_counts.end());
  const std::size_t min_k = *std::min_element(dominant_counts.begin(), dominant_counts.end());
  const std::size_t max_k = *std::max_element(dominant_counts.begin(), dominant_counts.end());
  if (min_k < 1) throw UsageError("--K values must be >= 1");
  if (max_k > min_n) {
    throw UsageError("every K must satisfy K <= N, but K=" + std::to_string(max_k) +
                     " exceeds N=" + std::to_string(min_n));
  }
  if (network.expected_point_count() < static_cast<double>(max_n)) {
    throw UsageError("window too small: lambda*(2L)^2 = " +
                     std::to_string(network.expected_point_count()) + " < N = " +
                     std::to_string(max_n));
  }
  if (all_window_interferers && sampler != Sampler::window) {
    throw UsageError("--all-window-interferers needs --sampler window");
  }
  const auto uses = [&](Method m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
  };
  if (uses(Method::sg) && !(network.pathloss_exponent > 2.0)) {
    throw UsageError("method sg needs eta > 2 (got eta = " +
                     std::to_string(network.pathloss_exponent) + ")");
  }
  if (uses(Method::probabilistic)) {
    if (!prob_model) {
      throw UsageError("method probabilistic needs --mu-S, --sigma-S-sq and --sigma0-sq");
    }
    if (network.pathloss_exponent != 4.0) {
      throw UsageError("method probabilistic is defined for eta = 4 only");
    }
    if (min_n < 2) throw UsageError("method probabilistic needs N >= 2");
    if (!(prob_model->sigma0_sq > 0.0)) throw UsageError("--sigma0-sq must be > 0");
    if (!(prob_model->sigma_s_sq >= 0.0)) throw UsageError("--sigma-S-sq must be >= 0");
  }
}

SweepSpec parse_args(int argc, const char* const* argv) {
  SweepSpec spec;
  CLI::App app{"Downlink SINR coverage of Poisson cellular networks: hybrid dominant-plus-tail "
               "estimator, Monte Carlo simulation, infinite-network benchmark and moment-based "
               "baseline. Writes CSV.",
               "pcov"};

  double tmin = -20.0, tmax = 20.0, tstep = 2.0;
  std::vector<std::string> methods{"hybrid", "simulation", "sg"};
  std::string sampler = "window";
  std::optional<double> mu_s, sigma_s_sq, sigma0_sq;

  app.add_option("--lambda", spec.network.bs_density, "BS density (BS/km^2)")
      ->capture_default_str();
  app.add_option("--eta", spec.network.pathloss_exponent, "path-loss exponent")
      ->capture_default_str();
  app.add_option("--noise", spec.network.noise_power, "noise power sigma^2 (linear)")
      ->capture_default_str();
  app.add_option("--half-width", spec.network.half_width, "simulation window half-width L (km)")
      ->capture_default_str();
  app.add_option("--K", spec.dominant_counts, "dominant counts (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--N", spec.interferer_counts, "interferer totals (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--trials", spec.settings.trials, "Monte Carlo trials M")->capture_default_str();
  app.add_option("--tmin-db", tmin, "lowest SINR threshold (dB)")->capture_default_str();
  app.add_option("--tmax-db", tmax, "highest SINR threshold (dB)")->capture_default_str();
  app.add_option("--tstep-db", tstep, "threshold step (dB)")->capture_default_str();
  app.add_option("--methods", methods, "hybrid,simulation,sg,probabilistic")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--quad-tol", spec.settings.quad_abs_tol, "quadrature absolute tolerance")
      ->capture_default_str();
  app.add_option("--seed", spec.settings.seed, "root seed")->capture_default_str();
  app.add_option("--threads", spec.threads, "worker threads (0: OpenMP default)")
      ->capture_default_str();
  app.add_option("--out", spec.output_path, "output CSV path ('-' for stdout)")
      ->capture_default_str();
  app.add_option("--sampler", sampler, "geometry sampler: window or direct")
      ->capture_default_str();
  app.add_flag("--all-window-interferers", spec.all_window_interferers,
               "simulation interferes with every window point, not just the N-1 nearest");
  app.add_option("--mu-S", mu_s, "baseline mean mu_S");
  app.add_option("--sigma-S-sq", sigma_s_sq, "baseline variance sigma_S^2");
  app.add_option("--sigma0-sq", sigma0_sq, "baseline normalization sigma_0^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  try {
    spec.grid = ThresholdGrid::db_range(tmin, tmax, tstep);
    spec.methods.clear();
    for (const auto& m : methods) {
      const Method parsed = parse_method(m);
      if (std::find(spec.methods.begin(), spec.methods.end(), parsed) == spec.methods.end()) {
        spec.methods.push_back(parsed);
      }
    }
    spec.sampler = parse_sampler(sampler);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const int given = int(mu_s.has_value()) + int(sigma_s_sq.has_value()) + int(sigma0_sq.has_value());
  if (given == 3) {
    spec.prob_model = ProbModelInputs{*mu_s, *sigma_s_sq, *sigma0_sq};
  } else if (given != 0) {
    throw UsageError("--mu-S, --sigma-S-sq and --sigma0-sq must be given together");
  }

  auto sort_unique = [](std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  sort_unique(spec.interferer_counts);
  sort_unique(spec.dominant_counts);
  spec.validate();
  return spec;
}

namespace {

template <class Fn>
CoverageCurve annotated(Method m, std::size_t n, std::size_t k, Fn&& fn) {
  const std::string where = "method=" + std::string(method_name(m)) + " N=" + std::to_string(n) +
                            " K=" + std::to_string(k) + ": ";
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + e.what());
  }
}

bool curve_order(const CoverageCurve& a, const CoverageCurve& b) {
  const auto ka = std::make_tuple(method_name(a.method), a.interferer_total, a.dominant_count);
  const auto kb = std::make_tuple(method_name(b.method), b.interferer_total, b.dominant_count);
  return ka < kb;
}

} // namespace

std::vector<CoverageCurve> run_sweep(const SweepSpec& spec, std::ostream* progress) {
  spec.validate();
  const Execution exec{Backend::openmp, spec.threads};
  std::vector<CoverageCurve> curves;
  std::optional<CoverageCurve> sg_cache;
  std::map<std::size_t, CoverageCurve> prob_cache;

  for (Method method : spec.methods) {
    for (std::size_t n : spec.interferer_counts) {
      for (std::size_t k : spec.dominant_counts) {
        const auto started = std::chrono::steady_clock::now();
        EstimatorSettings est = spec.settings;
        est.interferer_total = n;
        est.dominant_count = k;
        CoverageCurve curve = annotated(method, n, k, [&]() -> CoverageCurve {
          switch (method) {
          case Method::hybrid:
            return hybrid_coverage(spec.network, est, spec.grid, spec.sampler, exec);
          case Method::simulation:
            return empirical_coverage(spec.network, est, spec.grid,
                                      {spec.sampler, spec.all_window_interferers}, exec);
          case Method::sg:
            if (!sg_cache) sg_cache = sg_coverage(spec.network, spec.grid, est.quad_abs_tol);
            return *sg_cache;
          case Method::probabilistic: {
            auto it = prob_cache.find(n);
            if (it == prob_cache.end()) {
              const ProbModelParams params{spec.prob_model->mu_s, spec.prob_model->sigma_s_sq,
                                           spec.prob_model->sigma0_sq, n};
              it = prob_cache.emplace(n, prob_model_coverage(params, spec.network, spec.grid))
                       .first;
            }
            return it->second;
          }
          }
          throw std::logic_error("unhandled method");
        });
        curve.interferer_total = n;
        curve.dominant_count = k;
        curves.push_back(std::move(curve));
        if (progress) {
          const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
          *progress << "pcov: " << method_name(method) << " eta=" << spec.network.pathloss_exponent
                    << " N=" << n << " K=" << k << " done in " << took.count() << " s\n";
        }
      }
    }
  }
  std::stable_sort(curves.begin(), curves.end(), curve_order);
  return curves;
}

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 9);
  return std::string(buf.data(), res.ptr);
}

void write_csv(const std::vector<CoverageCurve>& curves, std::ostream& out) {
  std::vector<const CoverageCurve*> ordered;
  for (const auto& c : curves) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CoverageCurve* a, const CoverageCurve* b) { return curve_order(*a, *b); });

  out << kCsvHeader << '\n';
  for (const CoverageCurve* c : ordered) {
    std::vector<const CoveragePoint*> points;
    for (const auto& p : c->points) points.push_back(&p);
    std::stable_sort(points.begin(), points.end(), [](const auto* a, const auto* b) {
      return a->threshold_db < b->threshold_db;
    });
    const std::string prefix = std::string(method_name(c->method)) + ',' +
                               format_real(c->pathloss_exponent) + ',' +
                               std::to_string(c->interferer_total) + ',' +
                               std::to_string(c->dominant_count) + ',';
    for (const CoveragePoint* p : points) {
      out << prefix << format_real(p->threshold_db) << ',' << format_real(p->estimate) << ','
          << format_real(p->std_error) << ',' << p->trials_used << '\n';
    }
  }
}

void write_csv(const std::vector<CoverageCurve>& curves, const std::string& path) {
  if (path == "-") {
    write_csv(curves, std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("write to standard output failed");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  }
  write_csv(curves, file);
  file.close();
  if (!file) throw std::runtime_error("writing '" + path + "' failed");
}

} // namespace pcov
