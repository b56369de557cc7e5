// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbreak {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
  public:
    using Error::Error;
};

/// A volume lies outside the meshed domain.
class OutOfDomain : public Error
{
  public:
    using Error::Error;
};

/// The stability constant cannot be represented (exponent overflow).
class StabilityUnbounded : public Error
{
  public:
    using Error::Error;
};

/// A time step larger than the stability budget allows.
class RejectedStep : public Error
{
  public:
    RejectedStep(std::string const& what, double dt, double dt_max)
        : Error(what), dt_(dt), dt_max_(dt_max)
    {
    }

    double dt() const noexcept { return dt_; }
    double dt_max() const noexcept { return dt_max_; }

  private:
    double dt_;
    double dt_max_;
};

/// The update produced a concentration below the clamping tolerance.
class SchemeFailure : public Error
{
  public:
    SchemeFailure(std::string const& what, std::size_t cell, double value)
        : Error(what), cell_(cell), value_(value)
    {
    }

    std::size_t cell() const noexcept { return cell_; }
    double value() const noexcept { return value_; }

  private:
    std::size_t cell_;
    double value_;
};

/// EOC is undefined because two consecutive meshes gave identical results.
class DegenerateConvergence : public Error
{
  public:
    using Error::Error;
};

/// Brute-force reference refused an instance above its size guard.
class InstanceTooLarge : public Error
{
  public:
    using Error::Error;
};

/// Configuration schema violation; `path()` is the offending field, e.g. "mesh.cells".
class ConfigError : public Error
{
  public:
    ConfigError(std::string path, std::string const& message)
        : Error(path + ": " + message), path_(std::move(path))
    {
    }

    std::string const& path() const noexcept { return path_; }

  private:
    std::string path_;
};

/// A refinement level of a convergence study failed.
class StudyFailure : public Error
{
  public:
    StudyFailure(std::size_t cells, std::string const& cause)
        : Error("study level with " + std::to_string(cells) + " cells failed: " + cause),
          cells_(cells)
    {
    }

    std::size_t cells() const noexcept { return cells_; }

  private:
    std::size_t cells_;
};

}  // namespace cbreak
