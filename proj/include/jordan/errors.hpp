#pragma once

#include <stdexcept>

namespace jordan {

/// Base class of every error thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible or invalid dimensions.
class dimension_error : public error {
 public:
  using error::error;
};

/// Numerical failure: singular/ill-conditioned input, nonpositive pivot,
/// or an iteration that did not converge within its cap.
class numeric_error : public error {
 public:
  using error::error;
};

/// Group closure failed: order cap exceeded or a generator is singular.
class closure_error : public error {
 public:
  using error::error;
};

/// A property the underlying theorem guarantees failed numerically.
/// This always signals tolerance breakdown, never a counterexample.
class verification_error : public error {
 public:
  using error::error;
};

/// Malformed input file or unknown catalog request.
class parse_error : public error {
 public:
  using error::error;
};

}  // namespace jordan
