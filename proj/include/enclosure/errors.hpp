// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace enclosure
{

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Invalid configuration or violated theorem hypothesis.
class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string &what) : Error(what) {}
};

// Argument outside the mathematical domain of an operation (tau <= 0, point
// inside the source ball for a gradient, ...).
class DomainError : public Error
{
public:
  explicit DomainError(const std::string &what) : Error(what) {}
};

// c(tau) + tau = 0 in the half-line problem.
class PoleError : public DomainError
{
public:
  explicit PoleError(const std::string &what) : DomainError(what) {}
};

class UnsupportedShapeError : public Error
{
public:
  explicit UnsupportedShapeError(const std::string &what) : Error(what) {}
};

// Regression / extraction failures.
class FitError : public Error
{
public:
  enum class Kind
  {
    window,            // zero or non-finite value inside the window, too few points
    no_decay,          // fitted slope >= 0
    diverging_gamma,   // |1 + 2 c1| below tolerance
    indeterminate,     // fit implies gamma < 0
    floor              // indicator below the noise floor on the whole window
  };

  FitError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

}  // namespace enclosure
