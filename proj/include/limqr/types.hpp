#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace limqr {

using Point2 = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad arguments or violated preconditions.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Factorization breakdown, non-convergence and similar numerical failures.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double pi = 3.14159265358979323846;

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

} // namespace limqr
