#pragma once

#include <stdexcept>
#include <string>

namespace pcov {

/// A computation ran but could not produce a trustworthy number: quadrature
/// that did not converge, a Monte Carlo run with no usable trials, or a
/// closed-form model evaluated outside its validity region.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The moment-based baseline was asked to evaluate outside the region where
/// its Gaussian closure is defined.
class ValidityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace pcov
