#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractlang {

// Base for every error the library raises. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, std::vector<std::string> expected, std::string found);

  SourcePos position() const noexcept { return pos_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  SourcePos pos_;
  std::vector<std::string> expected_;
  std::string found_;
};

enum class WellFormedness { kUnguarded, kFreeVariable };

class WellFormednessError : public Error {
 public:
  WellFormednessError(WellFormedness kind, std::string variable, SourcePos pos);

  WellFormedness kind() const noexcept { return kind_; }
  const std::string& variable() const noexcept { return variable_; }
  SourcePos position() const noexcept { return pos_; }

 private:
  WellFormedness kind_;
  std::string variable_;
  SourcePos pos_;
};

class ProbabilityRangeError : public Error {
 public:
  ProbabilityRangeError(std::string literal, SourcePos pos);
  const std::string& literal() const noexcept { return literal_; }

 private:
  std::string literal_;
};

class StateBudgetExceeded : public Error {
 public:
  explicit StateBudgetExceeded(std::size_t budget);
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

class MalformedDerivation : public Error {
 public:
  using Error::Error;
};

class NotAContraction : public Error {
 public:
  explicit NotAContraction(double sigma_max);
  double sigma_max() const noexcept { return sigma_max_; }

 private:
  double sigma_max_;
};

class UnknownAction : public Error {
 public:
  explicit UnknownAction(std::string action);
  const std::string& action() const noexcept { return action_; }

 private:
  std::string action_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int lhs, int rhs);
};

}  // namespace fractlang
