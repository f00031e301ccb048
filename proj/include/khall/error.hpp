#ifndef KHALL_ERROR_HPP
#define KHALL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace khall {

enum class ErrorCode {
  NonInvertibleGenerator,
  UnknownGenerator,
  UnsupportedRelation,
  NameCollision,
  RingMismatch,
  DiagonalSquare,
  DivisionByZero,
  DenominatorVanishes,
  NotPolynomial,
  NotDivisible,
  UnfactoredDenominator,
  DeltaSquare,
  IncompatibleTruncation,
  RankNotZero,
  UnknownMonomial,
  NotSymmetric,
  ExponentOverflow,
  SyntaxError,
  UsageError,
};

std::string_view error_name(ErrorCode code);

// Every kernel failure is reported through this type; `code()` is stable and
// is what the CLI maps onto its error output.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& what)
      : Error(ErrorCode::SyntaxError,
              std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace khall

#endif
