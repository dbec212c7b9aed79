#ifndef AFV_ERROR_HPP
#define AFV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace afv {

/// Malformed or inconsistent input: wrong dimensions, invalid bodies, bad files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well formed but a mathematical hypothesis of the requested
/// operation does not hold (e.g. a matrix that must be PSD is not).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace afv

#endif  // AFV_ERROR_HPP
