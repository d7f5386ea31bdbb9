#pragma once

#include <stdexcept>
#include <string>

namespace pwsync {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph, graph file, or graph operation on missing edges.
class GraphError : public Error {
public:
  using Error::Error;
};

/// Dimension mismatches and invalid numeric arguments.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A hypothesis of the synchronization theorem does not hold.
/// `clause()` names the violated hypothesis, e.g. "(b)".
class HypothesisError : public Error {
public:
  HypothesisError(std::string clause, const std::string& what)
      : Error("hypothesis " + clause + " violated: " + what), clause_(std::move(clause)) {}

  const std::string& clause() const noexcept { return clause_; }

private:
  std::string clause_;
};

/// Bad experiment configuration; `field()` is the JSON path of the offending entry.
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

}  // namespace pwsync
