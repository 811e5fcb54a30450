#ifndef STEPLIKE_ERRORS_HPP
#define STEPLIKE_ERRORS_HPP

#include <stdexcept>

namespace steplike {

// malformed JSON in a potential or config document
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// evaluation requested at (or too close to) a projection branch point V+/V-
class BranchPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// scattering coefficients requested where the Jost Wronskian vanishes
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// winding contour passes too close to a zero, or the argument-principle
// integral did not settle near an integer
class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// step-size underflow and similar integration failures
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace steplike

#endif
