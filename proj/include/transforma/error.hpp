#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace transforma {

enum class ErrorKind {
  Parse,
  Dimension,
  NegativeEntry,
  Structural,
  NonProductive,
  ZeroCapital,
  Singular,
  NoConvergence,
  ZeroMatrix,
  WageExceedsValue,
  ZeroOutputValue,
  NegativeCapital,
  NoRoot,
  NotApplicable,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Dimension: return "DimensionMismatch";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::Structural: return "StructuralError";
    case ErrorKind::NonProductive: return "NonProductive";
    case ErrorKind::ZeroCapital: return "ZeroCapital";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::WageExceedsValue: return "WageExceedsValue";
    case ErrorKind::ZeroOutputValue: return "ZeroOutputValue";
    case ErrorKind::NegativeCapital: return "NegativeCapital";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. The kind is stable and machine
/// readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Hawkins-Simon failure: leading principal minor `order` of (I - A) is not
/// strictly positive.
class NonProductiveError : public Error {
 public:
  NonProductiveError(std::size_t order, double minor)
      : Error(ErrorKind::NonProductive,
              "Hawkins-Simon condition violated: leading principal minor of order " +
                  std::to_string(order) + " of (I - A) is " + std::to_string(minor)),
        order_(order),
        minor_(minor) {}

  std::size_t order() const noexcept { return order_; }
  double minor() const noexcept { return minor_; }

 private:
  std::size_t order_;
  double minor_;
};

}  // namespace transforma
