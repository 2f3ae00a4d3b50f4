#pragma once

#include <stdexcept>

namespace gtp {

// A question the exact machinery could not settle from finite data: a
// malformed gadget generator, a prefix outside every family member, a
// bounded ordinal scan that found nothing.
class UnresolvedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a proved identity fails at run time. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gtp
