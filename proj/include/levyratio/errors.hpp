#pragma once

#include <stdexcept>
#include <string>

namespace levyratio
{
//! Bad argument or parameter outside an operation's domain.
class DomainError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Quadrature, root finding, or truncation failed to meet its tolerance.
class NumericError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Malformed experiment configuration or unreadable input file.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Output could not be written.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace levyratio
