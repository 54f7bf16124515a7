#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace predrisk {

/// Conditioning on an observation whose marginal probability is zero (or
/// which lies outside the observation space entirely).
class ConditioningError : public std::runtime_error {
 public:
  explicit ConditioningError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Deterministic rule enumeration would exceed the caller-supplied cap.
class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(std::uint64_t count, bool lower_bound, std::uint64_t cap)
      : std::runtime_error("rule enumeration too large: " +
                           std::string(lower_bound ? "more than " : "") +
                           std::to_string(count) + " rules exceed cap " +
                           std::to_string(cap)),
        count_(count),
        lower_bound_(lower_bound),
        cap_(cap) {}

  /// Number of rules (saturated; see lower_bound()).
  std::uint64_t count() const { return count_; }
  /// True when count() is only a lower bound (the true count overflowed).
  bool lower_bound() const { return lower_bound_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t count_;
  bool lower_bound_;
  std::uint64_t cap_;
};

/// Base class for problems with a model/loss/experiment document.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lexical or grammatical error, with 1-based line/column of the offense.
class ParseError : public SpecError {
 public:
  ParseError(int line, int column, const std::string& msg)
      : SpecError("parse error at line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Structurally valid document that violates the schema (wrong key, wrong
/// shape, out-of-range value). Names the offending key.
class SchemaError : public SpecError {
 public:
  SchemaError(const std::string& key, const std::string& msg)
      : SpecError("schema error at `" + key + "`: " + msg), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Schema-valid document whose model fails validation (normalization,
/// positivity, ...). Message carries the per-index violation list.
class ModelInvalidError : public SpecError {
 public:
  explicit ModelInvalidError(const std::string& msg) : SpecError(msg) {}
};

/// A rule table that does not fit the model it is applied to.
class RuleMismatchError : public std::runtime_error {
 public:
  explicit RuleMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace predrisk
