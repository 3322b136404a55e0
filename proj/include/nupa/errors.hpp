#pragma once

#include <stdexcept>
#include <string>

namespace nupa {

// Malformed text: wrong separators, illegal characters, empty or
// non-canonical parts.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input outside an operation's domain (zero denominator,
// negative result where the type has no sign, position out of range, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Sampling could not satisfy the task constraints within the retry budget.
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

// A (task, representation, variant) combination outside the supported table.
class UnsupportedTaskError : public std::runtime_error {
 public:
  explicit UnsupportedTaskError(const std::string& what) : std::runtime_error(what) {}
};

// Exemplar pool too small for the requested few-shot configuration.
class InsufficientPoolError : public std::runtime_error {
 public:
  explicit InsufficientPoolError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration (bad file, missing field, out-of-range value).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A model endpoint failed after retries. Recorded per instance; never fatal
// to a run.
class EndpointError : public std::runtime_error {
 public:
  explicit EndpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nupa
