#pragma once

#include <stdexcept>
#include <string>

namespace pvmerge {

/// Bad input: out-of-range parameters, malformed vectors, wrong dimensions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size budget (LP variables, grid points) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state that correct code can never reach, e.g. an infeasible marginal LP.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pvmerge
