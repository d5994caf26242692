#pragma once

#include <string_view>

#include "fractlang/term.hpp"

namespace fractlang {

enum class Flavor { kClassic, kProbabilistic };

struct ParseOptions {
  bool require_closed = true;
  bool require_guarded = true;
};

// Grammar (comments run from '#' to end of line):
//
//   term    := 'mu' VAR '.' term | sum
//   sum     := summand (PLUS summand)*
//   summand := ACTION '.' body | atom | 'mu' VAR '.' term
//   body    := ACTION '.' body | atom | 'mu' VAR '.' term
//   atom    := VAR | '(' term ')'
//
// PLUS is `+` for classic terms and `+[r]` for probabilistic ones, with r a
// fraction `p/q`, a decimal, or an integer. `mu` scopes as far right as
// possible and sums associate to the left.
Expr parse_expr(std::string_view text, Flavor flavor, const ParseOptions& options = {});

Term parse_term(std::string_view text, const ParseOptions& options = {});
PTerm parse_pterm(std::string_view text, const ParseOptions& options = {});

bool is_action_label(std::string_view s);

}  // namespace fractlang
