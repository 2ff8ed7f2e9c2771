#pragma once

// Monte Carlo trial drivers. Every estimator is written as a per-trial kernel
// `bool(std::uint64_t trial, std::span<double> values)` that fills one value
// per threshold (returning false to skip the trial). The drivers below own the
// loop and the reduction:
//
//   run_trials_serial  - the plain reference loop, trial 0, 1, 2, ...
//   run_trials_openmp  - fixed blocks of kTrialsPerBlock trials, scheduled
//                        dynamically, merged in block order afterwards.
//
// Block boundaries do not depend on the worker count, so the OpenMP result is
// bit-identical for any number of threads. It differs from the serial loop
// only by floating-point summation order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcov {

enum class Backend { serial, openmp };

struct Execution {
  Backend backend = Backend::openmp;
  int workers = 0; // 0: OpenMP default
};

inline constexpr std::uint64_t kTrialsPerBlock = 256;

/// Per-threshold running sums over retained trials.
struct TrialTotals {
  std::uint64_t trials_used = 0;
  std::vector<double> sum;
  std::vector<double> sum_sq;

  explicit TrialTotals(std::size_t width = 0) : sum(width, 0.0), sum_sq(width, 0.0) {}

  void add(std::span<const double> values) {
    ++trials_used;
    for (std::size_t j = 0; j < values.size(); ++j) {
      sum[j] += values[j];
      sum_sq[j] += values[j] * values[j];
    }
  }

  void merge(const TrialTotals& other) {
    trials_used += other.trials_used;
    for (std::size_t j = 0; j < sum.size(); ++j) {
      sum[j] += other.sum[j];
      sum_sq[j] += other.sum_sq[j];
    }
  }

  double mean(std::size_t j) const {
    return trials_used == 0 ? 0.0 : sum[j] / static_cast<double>(trials_used);
  }

  /// Sample standard deviation (n - 1 denominator) divided by sqrt(n).
  double standard_error(std::size_t j) const;
};

template <class TrialFn>
TrialTotals run_trials_serial(std::uint64_t trials, std::size_t width, TrialFn&& trial_fn) {
  TrialTotals totals(width);
  std::vector<double> values(width);
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (trial_fn(t, std::span<double>(values))) totals.add(values);
  }
  return totals;
}

template <class TrialFn>
TrialTotals run_trials_openmp(std::uint64_t trials, std::size_t width, int workers,
                              TrialFn&& trial_fn) {
  const auto blocks = static_cast<std::int64_t>((trials + kTrialsPerBlock - 1) / kTrialsPerBlock);
  std::vector<TrialTotals> partial(static_cast<std::size_t>(blocks), TrialTotals(width));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(blocks));
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#else
  (void)workers;
#endif
  for (std::int64_t b = 0; b < blocks; ++b) {
    const auto slot = static_cast<std::size_t>(b);
    try {
      std::vector<double> values(width);
      const std::uint64_t first = static_cast<std::uint64_t>(b) * kTrialsPerBlock;
      const std::uint64_t last = std::min(trials, first + kTrialsPerBlock);
      for (std::uint64_t t = first; t < last; ++t) {
        if (trial_fn(t, std::span<double>(values))) partial[slot].add(values);
      }
    } catch (...) {
      failures[slot] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f); // lowest failing block, independent of scheduling
  }
  TrialTotals totals(width);
  for (const auto& p : partial) totals.merge(p);
  return totals;
}

template <class TrialFn>
TrialTotals run_trials(std::uint64_t trials, std::size_t width, const Execution& exec,
                       TrialFn&& trial_fn) {
  if (exec.backend == Backend::serial) return run_trials_serial(trials, width, trial_fn);
  return run_trials_openmp(trials, width, exec.workers, trial_fn);
}

} // namespace pcov
