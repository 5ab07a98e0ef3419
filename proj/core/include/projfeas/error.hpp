#ifndef PROJFEAS_ERROR_HPP
#define PROJFEAS_ERROR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace projfeas {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or schema violation in caller-supplied data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinity showed up where a finite value is required.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The requested operation needs data the problem does not carry
/// (e.g. an intersection oracle).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A projection solver ran out of budget. Carries the best iterate found and
/// the residuals it reached so callers can decide what to do with it.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, Eigen::VectorXd best_iterate,
              double feasibility_residual, double optimality_residual)
      : Error(what),
        best_iterate_(std::move(best_iterate)),
        feasibility_residual_(feasibility_residual),
        optimality_residual_(optimality_residual) {}

  const Eigen::VectorXd& best_iterate() const noexcept { return best_iterate_; }
  double feasibility_residual() const noexcept { return feasibility_residual_; }
  double optimality_residual() const noexcept { return optimality_residual_; }

 private:
  Eigen::VectorXd best_iterate_;
  double feasibility_residual_;
  double optimality_residual_;
};

}  // namespace projfeas

#endif  // PROJFEAS_ERROR_HPP
