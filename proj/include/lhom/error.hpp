#ifndef LHOM_ERROR_HPP
#define LHOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lhom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the admissible range of an ensemble, field or option.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SolveError : public Error {
 public:
  SolveError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lhom

#endif  // LHOM_ERROR_HPP
