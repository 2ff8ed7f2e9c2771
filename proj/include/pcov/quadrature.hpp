#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcov/errors.hpp"

namespace pcov {

inline constexpr double kDefaultQuadTol = 1e-6;

/// Result of a one-dimensional integral.
struct Integral1D {
  double lower = 0.0;
  double upper = 0.0; // may be +inf
  double abs_tol = kDefaultQuadTol;
  double value = 0.0;
  double est_error = 0.0;
  std::size_t intervals = 0;
};

/// Thrown when the subdivision budget runs out. Carries the best estimate.
class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, Integral1D best)
      : NumericalError(what), best_(best) {}
  const Integral1D& best() const noexcept { return best_; }

private:
  Integral1D best_;
};

struct QuadratureOptions {
  std::size_t max_intervals = 2000;
};

namespace detail {

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double abs_value; // integral of |f|, for the roundoff floor
};

template <class F>
Segment gauss_kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(fc) * kKronrodWeights[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

inline std::string short_real(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 6);
  return std::string(buf.data(), res.ptr);
}

inline bool larger_error(const Segment& x, const Segment& y) { return x.error < y.error; }

template <class F>
Integral1D adaptive_finite(F& f, double a, double b, double abs_tol,
                           const QuadratureOptions& opts) {
  constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();
  std::vector<Segment> heap;
  heap.reserve(16);
  heap.push_back(gauss_kronrod15(f, a, b));
  double value = heap.front().value;
  double error = heap.front().error;
  double abs_value = heap.front().abs_value;

  // Converged once the summed error estimate is within tolerance, or has hit
  // the floating-point floor of the integral of |f|.
  auto done = [&] { return error <= std::max(abs_tol, kRoundoff * abs_value); };

  while (!done()) {
    if (heap.size() >= opts.max_intervals || !std::isfinite(value)) {
      Integral1D best{a, b, abs_tol, value, error, heap.size()};
      throw QuadratureError("adaptive quadrature did not reach tolerance " + short_real(abs_tol) +
                                " on [" + short_real(a) + ", " + short_real(b) +
                                "]: estimate " + short_real(value) + " +/- " + short_real(error),
                            best);
    }
    std::pop_heap(heap.begin(), heap.end(), larger_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod15(f, worst.a, mid);
    const Segment right = gauss_kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), larger_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), larger_error);
  }
  // Running sums drift; re-add from the segments for the reported value.
  value = 0.0;
  error = 0.0;
  for (const auto& s : heap) {
    value += s.value;
    error += s.error;
  }
  return {a, b, abs_tol, value, error, heap.size()};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate |K15 - G7| drops to `abs_tol` (or to the floating-point floor,
/// 64 eps times the integral of |f|). An infinite upper limit is mapped to
/// [0, 1) with t = a + v / (1 - v); the endpoint v = 1 is never evaluated.
///
/// Throws std::invalid_argument on bad limits or tolerance, and
/// QuadratureError once `opts.max_intervals` subintervals are in use.
template <class F>
Integral1D integrate_adaptive(F&& f, double a, double b, double abs_tol = kDefaultQuadTol,
                              const QuadratureOptions& opts = {}) {
  if (!std::isfinite(a)) throw std::invalid_argument("lower limit must be finite");
  if (std::isnan(b) || b == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("upper limit must be a number or +inf");
  }
  if (!(abs_tol > 0.0)) throw std::invalid_argument("absolute tolerance must be > 0");
  if (!(a < b)) {
    if (a == b) return {a, b, abs_tol, 0.0, 0.0, 0};
    throw std::invalid_argument("integration limits must satisfy a <= b");
  }
  if (std::isinf(b)) {
    auto mapped = [&f, a](double v) {
      const double w = 1.0 - v;
      const double jac = 1.0 / (w * w);
      const double y = f(a + v / w) * jac;
      return std::isfinite(y) ? y : 0.0;
    };
    Integral1D out = detail::adaptive_finite(mapped, 0.0, 1.0, abs_tol, opts);
    out.lower = a;
    out.upper = b;
    return out;
  }
  return detail::adaptive_finite(f, a, b, abs_tol, opts);
}

/// s t / (t^eta + s): the PGFL tail integrand s t^{1-eta} / (1 + s t^{-eta})
/// in a form that does not overflow t^{-eta} near t = 0.
inline double tail_integrand(double s, double eta, double t) noexcept {
  if (s == 0.0) return 0.0;
  return s * t / (std::pow(t, eta) + s);
}

/// Integral of tail_integrand over [a, b]; b may be +inf only when eta > 2.
double tail_integral(double s, double eta, double a, double b,
                     double abs_tol = kDefaultQuadTol);

/// Antiderivative-based value of tail_integral for eta in {2, 4}.
double tail_integral_closed_form(double s, double eta, double a, double b);

} // namespace pcov
