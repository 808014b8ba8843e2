#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riskcal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NaNInput : public Error {
 public:
  NaNInput() : Error("input contains NaN") {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error("empty input: " + what) {}
};

class EmptyGrid : public Error {
 public:
  EmptyGrid() : Error("lambda grid is empty") {}
};

class GridNotAscending : public Error {
 public:
  explicit GridNotAscending(std::size_t col)
      : Error("lambda grid is not strictly ascending at index " + std::to_string(col)), col_(col) {}
  std::size_t column() const noexcept { return col_; }

 private:
  std::size_t col_;
};

class NonMonotoneRow : public Error {
 public:
  NonMonotoneRow(std::size_t row, std::size_t col)
      : Error("loss row " + std::to_string(row) + " increases at column " + std::to_string(col)),
        row_(row),
        col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class LossExceedsBound : public Error {
 public:
  LossExceedsBound(std::size_t row, std::size_t col)
      : Error("loss at row " + std::to_string(row) + ", column " + std::to_string(col) +
              " exceeds the upper bound"),
        row_(row),
        col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class RowLengthMismatch : public Error {
 public:
  explicit RowLengthMismatch(std::size_t row)
      : Error("loss row " + std::to_string(row) + " does not match the grid length"), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

class InvalidCounts : public Error {
 public:
  explicit InvalidCounts(const std::string& what) : Error("invalid counts: " + what) {}
};

class ZeroCalibrationItems : public Error {
 public:
  ZeroCalibrationItems() : Error("rule is undefined with zero calibration items") {}
};

class UnknownMethod : public Error {
 public:
  explicit UnknownMethod(const std::string& tag) : Error("unknown method: " + tag) {}
};

class NotIndicatorMatrix : public Error {
 public:
  NotIndicatorMatrix(std::size_t row, std::size_t col)
      : Error("entry at row " + std::to_string(row) + ", column " + std::to_string(col) +
              " is not a 0/1 indicator loss"),
        row_(row),
        col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class InvalidBudget : public Error {
 public:
  explicit InvalidBudget(const std::string& what) : Error("invalid risk budget: " + what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace riskcal
