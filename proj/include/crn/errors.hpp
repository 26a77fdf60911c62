#ifndef CRN_ERRORS_HPP
#define CRN_ERRORS_HPP

#include <stdexcept>

namespace crn {

/// Raised when a requested exhaustive computation exceeds its size guard.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crn

#endif  // CRN_ERRORS_HPP
