#pragma once

#include <stdexcept>
#include <string>

namespace hlat {

/// Malformed input: bad prime, wrong shape, unparsable rational, schema violation.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation that needs det(gram) != 0 received a degenerate form.
class SingularForm : public InputError {
 public:
  using InputError::InputError;
};

/// The nearly-unimodular decision was asked about a form whose coradical is not
/// killed by p. Callers should refine the lattice or fall back to the Jordan oracle.
class NotNearlyUnimodular : public InputError {
 public:
  using InputError::InputError;
};

/// A witness was requested for forms that are not isometric.
class NotIsometric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an algorithm does not hold for the supplied data.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace hlat
