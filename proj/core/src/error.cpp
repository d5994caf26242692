#include "fractlang/error.hpp"

namespace fractlang {

namespace {

std::string describe_syntax(SourcePos pos, const std::vector<std::string>& expected,
                            const std::string& found) {
  std::string msg = "syntax error at " + std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                    ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += (i + 1 == expected.size()) ? " or " : ", ";
    msg += expected[i];
  }
  msg += ", found " + found;
  return msg;
}

std::string describe_wf(WellFormedness kind, const std::string& var, SourcePos pos) {
  std::string msg = kind == WellFormedness::kUnguarded ? "unguarded occurrence of variable '"
                                                       : "free variable '";
  msg += var + "'";
  if (pos.line > 0) msg += " at " + std::to_string(pos.line) + ":" + std::to_string(pos.column);
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(SourcePos pos, std::vector<std::string> expected, std::string found)
    : Error(describe_syntax(pos, expected, found)),
      pos_(pos),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

WellFormednessError::WellFormednessError(WellFormedness kind, std::string variable, SourcePos pos)
    : Error(describe_wf(kind, variable, pos)), kind_(kind), variable_(std::move(variable)), pos_(pos) {}

ProbabilityRangeError::ProbabilityRangeError(std::string literal, SourcePos pos)
    : Error("probability " + literal + " at " + std::to_string(pos.line) + ":" +
            std::to_string(pos.column) + " is outside [0,1]"),
      literal_(std::move(literal)) {}

StateBudgetExceeded::StateBudgetExceeded(std::size_t budget)
    : Error("reachable state space exceeds the budget of " + std::to_string(budget) + " states"),
      budget_(budget) {}

NotAContraction::NotAContraction(double sigma_max)
    : Error("not a contraction: largest singular value " + std::to_string(sigma_max)),
      sigma_max_(sigma_max) {}

UnknownAction::UnknownAction(std::string action)
    : Error("action '" + action + "' has no interpretation"), action_(std::move(action)) {}

DimensionMismatch::DimensionMismatch(int lhs, int rhs)
    : Error("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}

}  // namespace fractlang
