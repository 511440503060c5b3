#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nnmanifold {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

enum class ErrorKind {
  // data errors
  MissingFile,
  SchemaViolation,
  LabelMismatch,
  RowCountMismatch,
  NonFiniteValue,
  ParseError,
  InvalidArgument,
  ShapeMismatch,
  MethodMismatch,
  MissingWeights,
  KTooLarge,
  LengthMismatch,
  EmptyClass,
  DegenerateClass,
  DegenerateInput,
  DegenerateDistances,
  TooFewNetworks,
  TooManyPoints,
  BadRadius,
  BadK,
  InfinitePointMismatch,
  InvalidSigma,
  // numerical failures
  ZeroRow,
  EigenFailure,
  DegenerateSpectrum,
  DegenerateBandwidth,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for failures of a numerical routine (as opposed to bad input data).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  ErrorKind kind_;
  std::string detail_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace nnmanifold
