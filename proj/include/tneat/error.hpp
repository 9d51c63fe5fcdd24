#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tneat {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Genome tensor operations.
class CapacityFull : public Error {
 public:
  using Error::Error;
};
class DuplicateKey : public Error {
 public:
  using Error::Error;
};
class DuplicateConn : public Error {
 public:
  using Error::Error;
};
class KeyNotFound : public Error {
 public:
  using Error::Error;
};
class ProtectedNode : public Error {
 public:
  using Error::Error;
};
class DanglingEndpoint : public Error {
 public:
  using Error::Error;
};
class BadAttrIndex : public Error {
 public:
  using Error::Error;
};
class InvalidValue : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};
class CycleDetected : public Error {
 public:
  using Error::Error;
};
class InvalidInput : public Error {
 public:
  using Error::Error;
};
class TerminalState : public Error {
 public:
  using Error::Error;
};

/// Raised by the oracle decoder when a genome breaks its structural invariants.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Text-format parse failure. Carries the 1-based line and the offending field.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ": " +
              (field.empty() ? std::string() : "field '" + field + "': ") + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Failures collected from a population-wide pass, keyed by genome index.
class PopulationError : public Error {
 public:
  struct Entry {
    std::size_t index;
    std::string message;
  };

  explicit PopulationError(std::vector<Entry> entries)
      : Error(summarize(entries)), entries_(std::move(entries)) {}

  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  static std::string summarize(const std::vector<Entry>& entries) {
    std::string out = std::to_string(entries.size()) + " genome(s) failed";
    if (!entries.empty()) {
      out += "; first: genome " + std::to_string(entries.front().index) + ": " +
             entries.front().message;
    }
    return out;
  }

  std::vector<Entry> entries_;
};

}  // namespace tneat
