#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcov/estimators.hpp"
#include "pcov/geometry.hpp"

namespace pcov {

/// Bad command line or inconsistent configuration (exit code 2).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// `--help` was given; what() holds the rendered help text.
class HelpRequested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Baseline moments supplied on the command line; N is filled per sweep entry.
struct ProbModelInputs {
  double mu_s = 0.0;
  double sigma_s_sq = 0.0;
  double sigma0_sq = 0.0;
};

struct SweepSpec {
  NetworkConfig network;
  EstimatorSettings settings; // K and N here are overridden by the lists below
  ThresholdGrid grid = ThresholdGrid::db_range(-20.0, 20.0, 2.0);
  std::vector<Method> methods{Method::hybrid, Method::simulation, Method::sg};
  std::optional<ProbModelInputs> prob_model;
  std::vector<std::size_t> interferer_counts{10};
  std::vector<std::size_t> dominant_counts{4};
  Sampler sampler = Sampler::window;
  bool all_window_interferers = false;
  int threads = 0;
  std::string output_path = "-"; // "-" is standard output

  /// Throws UsageError naming the violated constraint.
  void validate() const;
};

/// Parses the command line into a validated spec. argv[0] is the program name.
SweepSpec parse_args(int argc, const char* const* argv);

/// One curve per (method, N, K), ordered by (method name, N, K). `progress`
/// receives one line per finished curve when non-null.
std::vector<CoverageCurve> run_sweep(const SweepSpec& spec, std::ostream* progress = nullptr);

/// Shortest decimal with 9 significant digits, '.' separator, no locale.
std::string format_real(double x);

inline constexpr const char* kCsvHeader = "method,eta,N,K,T_db,coverage,stderr,trials_used";

void write_csv(const std::vector<CoverageCurve>& curves, std::ostream& out);
/// Writes to `path` ("-" for standard output). Throws std::runtime_error
/// naming the path and the failing operation.
void write_csv(const std::vector<CoverageCurve>& curves, const std::string& path);

} // namespace pcov
