#pragma once

#include <stdexcept>
#include <string>

namespace decoy {

// Base for every error raised by the library; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// A parameter set fails one of its defining inequalities.
class ConstraintViolation : public Error
{
  public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function (e.g. h(x), x > 1).
class DomainError : public Error
{
  public:
    using Error::Error;
};

// Honest channel with zero gain: error rates are undefined.
class DegenerateChannel : public Error
{
  public:
    using Error::Error;
};

// Simulated tallies too sparse to form a statistic.
class InsufficientData : public Error
{
  public:
    using Error::Error;
};

// Matrix that is not a density operator within tolerance.
class InvalidState : public Error
{
  public:
    using Error::Error;
};

class WrongModeLabels : public Error
{
  public:
    using Error::Error;
};

// A checked property failed; the message carries the offending point.
class AssertionFailure : public Error
{
  public:
    using Error::Error;
};

class ConfigError : public Error
{
  public:
    using Error::Error;
};

//! File could not be read or written; the message names the path.
class IoError : public Error
{
  public:
    using Error::Error;
};

// The PNS adversary cannot reproduce the honest signal gain.
class Infeasible : public Error
{
  public:
    Infeasible(std::string const& what, double target_gain, double achievable_gain)
        : Error(what), target_gain_(target_gain), achievable_gain_(achievable_gain)
    {
    }

    double target_gain() const noexcept { return target_gain_; }
    //! Closest gain the restricted strategy can reach.
    double achievable_gain() const noexcept { return achievable_gain_; }

  private:
    double target_gain_;
    double achievable_gain_;
};

}  // namespace decoy
