#include "pcov/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcov {

namespace {

void check_tail_args(double s, double eta, double a, double b) {
  if (!(s >= 0.0)) throw std::invalid_argument("tail integral needs s >= 0");
  if (!(eta > 0.0)) throw std::invalid_argument("tail integral needs eta > 0");
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("tail integral needs a finite lower limit >= 0");
  }
  if (std::isnan(b) || b < a) throw std::invalid_argument("tail integral needs b >= a");
  if (std::isinf(b) && eta <= 2.0) {
    throw std::invalid_argument(
        "tail integral to infinity diverges for eta <= 2 (s t / (t^eta + s) ~ s t^(1-eta))");
  }
}

// Integral of s t / (t^eta + s) over [c, inf) for s c^-eta <= 1/4, from the
// termwise-integrated expansion s t^(1-eta) sum_k (-s t^-eta)^k. The series
// alternates with shrinking terms, so the first omitted term bounds the error.
double tail_series(double s, double eta, double c) {
  const double x = s * std::pow(c, -eta);
  const double scale = s * std::pow(c, 2.0 - eta);
  double sum = 0.0;
  double power = 1.0; // (-x)^k
  for (int k = 0; k < 200; ++k) {
    const double term = power / ((k + 1) * eta - 2.0);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    power *= -x;
  }
  return scale * sum;
}

} // namespace

double tail_integral(double s, double eta, double a, double b, double abs_tol) {
  check_tail_args(s, eta, a, b);
  if (s == 0.0 || a == b) return 0.0;
  auto f = [s, eta](double t) { return tail_integrand(s, eta, t); };
  if (std::isinf(b)) {
    // Quadrature up to the point where s t^-eta = 1/4, series beyond it. The
    // integrand decays only like t^(1-eta), which a mapped finite interval
    // cannot resolve when eta is close to 2.
    const double cut = std::max(a, std::pow(4.0 * s, 1.0 / eta));
    const double head = cut > a ? integrate_adaptive(f, a, cut, abs_tol).value : 0.0;
    return std::max(head + tail_series(s, eta, cut), 0.0);
  }
  return std::max(integrate_adaptive(f, a, b, abs_tol).value, 0.0);
}

double tail_integral_closed_form(double s, double eta, double a, double b) {
  check_tail_args(s, eta, a, b);
  if (s == 0.0 || a == b) return 0.0;
  if (eta == 4.0) {
    // d/dt (sqrt(s)/2) atan(t^2 / sqrt(s)) = s t / (t^4 + s)
    const double rs = std::sqrt(s);
    const double upper = std::isinf(b) ? std::numbers::pi / 2.0 : std::atan(b * b / rs);
    return 0.5 * rs * (upper - std::atan(a * a / rs));
  }
  if (eta == 2.0) {
    // d/dt (s/2) ln(t^2 + s) = s t / (t^2 + s)
    return 0.5 * s * std::log1p((b * b - a * a) / (a * a + s));
  }
  throw std::invalid_argument("closed-form tail integral exists only for eta in {2, 4}");
}

} // namespace pcov
