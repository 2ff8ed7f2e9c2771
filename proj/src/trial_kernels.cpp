#include "pcov/trial_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace pcov {

double TrialTotals::standard_error(std::size_t j) const {
  if (trials_used < 2) return 0.0;
  const double n = static_cast<double>(trials_used);
  const double m = sum[j] / n;
  const double var = std::max(0.0, (sum_sq[j] - n * m * m) / (n - 1.0));
  return std::sqrt(var / n);
}

} // namespace pcov
