#pragma once

#include <stdexcept>
#include <string>

namespace shiftlab {

/// Bad arguments, malformed input, or a violated precondition.
class usage_error : public std::invalid_argument {
 public:
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured resource cap (enumeration length, horizon) refused the request.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// A bounded search (gap index, witness, parameter chain) came up empty.
class search_failure : public std::runtime_error {
 public:
  explicit search_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shiftlab
