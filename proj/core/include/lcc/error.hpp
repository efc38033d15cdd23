#pragma once

#include <stdexcept>
#include <string>

namespace lcc {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad CSV cells, wrong dimensions, missing classes, bad arguments.
class DataError : public Error {
 public:
  using Error::Error;
};

// Numeric failure: infeasible training LP, singular system, solver iteration cap.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcc
