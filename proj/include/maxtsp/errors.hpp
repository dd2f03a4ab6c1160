#pragma once

#include <stdexcept>
#include <string>

namespace maxtsp {

/// Malformed or out-of-range problem instance (negative weight, missing pair, n < 3).
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A postcondition that theory guarantees failed; always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NoPerfectMatching : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exchange-set or coloring dispatch met a configuration it has no rule for.
class UnhandledCase : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotKiteFree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace maxtsp
