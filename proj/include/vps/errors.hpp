#ifndef VPS_ERRORS_HPP
#define VPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vps {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation outside the admissible orthant: pole (x_i = 0 with a negative
// exponent) or a negative base raised to a non-integer exponent.
struct DomainError : Error {
  using Error::Error;
};

// Integer arithmetic exceeded the representable range.
struct OverflowError : Error {
  using Error::Error;
};

// A field handed to the diagonal decomposition contains off-diagonal terms.
struct NotDiagonalError : Error {
  using Error::Error;
};

// The closure condition a'(j+1) = 0 failed for some divergence monomial,
// i.e. the input field is not divergence-free.
struct NotDivergenceFreeError : Error {
  NotDivergenceFreeError(std::string monomial_, double residual_)
      : Error("field is not divergence-free at monomial " + monomial_ +
              " (residual " + std::to_string(residual_) + ")"),
        monomial(std::move(monomial_)),
        residual(residual_) {}
  std::string monomial;
  double residual;
};

// The exact power-law flow blows up before the requested step completes.
struct SingularStepError : Error {
  SingularStepError(double blow_up_time_, std::string monomial_)
      : Error("step crosses the flow singularity at t* = " +
              std::to_string(blow_up_time_) + " (monomial " + monomial_ + ")"),
        blow_up_time(blow_up_time_),
        monomial(std::move(monomial_)) {}
  double blow_up_time;
  std::string monomial;
};

// An elementary field with a = 0 has no integral basis.
struct DegenerateFieldError : Error {
  using Error::Error;
};

// A built-in problem failed its internal consistency check.
struct ConstructionError : Error {
  using Error::Error;
};

}  // namespace vps

#endif  // VPS_ERRORS_HPP
