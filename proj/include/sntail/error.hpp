// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sntail {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain an operation is defined on.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its budget before meeting its tolerance.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

private:
  double achieved_error_;
};

/// The integration region could not be located or is unbounded.
class RegionError : public Error {
public:
  using Error::Error;
};

/// The radial profile vanishes at the maximizer; the leading-order
/// prediction degenerates.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Tail data does not follow c * eps^e.
class NonPowerLawError : public Error {
public:
  using Error::Error;
};

}  // namespace sntail
