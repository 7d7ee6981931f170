#pragma once

#include <stdexcept>
#include <string>

namespace polylink {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Degenerate or otherwise unusable polytope input.
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedDimensionError : public ConstructionError {
 public:
  explicit UnsupportedDimensionError(const std::string& what) : ConstructionError(what) {}
};

class LookupError : public std::out_of_range {
 public:
  explicit LookupError(const std::string& what) : std::out_of_range(what) {}
};

class SamplingEfficiencyError : public std::runtime_error {
 public:
  explicit SamplingEfficiencyError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class SizeGuardError : public std::length_error {
 public:
  explicit SizeGuardError(const std::string& what) : std::length_error(what) {}
};

}  // namespace polylink
