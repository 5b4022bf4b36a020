#pragma once

#include <stdexcept>
#include <string>

namespace zipfscale {

/// Argument outside the mathematical domain or regime of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Problem too large for a dense oracle.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed token stream, counts file or CSV input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zipfscale
