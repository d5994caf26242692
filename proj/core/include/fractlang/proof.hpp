#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fractlang/parser.hpp"
#include "fractlang/term.hpp"

namespace fractlang {

enum class Rule {
  kID,
  kCM,
  kAS,
  kDS,
  kFP,
  kCN,
  kAE,
  kUA,
  kRefl,
  kSym,
  kTrans,
  kCong,  // congruence at a single position; derivable from CN
};

std::string to_string(Rule rule);
std::optional<Rule> rule_from_string(std::string_view name);

enum class ProofSystem { kClassic, kProbabilistic };

inline Flavor flavor_of(ProofSystem system) {
  return system == ProofSystem::kClassic ? Flavor::kClassic : Flavor::kProbabilistic;
}

/// One line of a derivation: `lhs == rhs` justified by `rule` from earlier
/// steps. `path` is used by Cong, `context`/`holes` by CN.
struct Step {
  std::size_t id = 0;
  Rule rule = Rule::kRefl;
  std::vector<std::size_t> premises;
  Expr lhs;
  Expr rhs;
  Path path;
  Expr context;
  std::vector<std::string> holes;
  std::size_t line = 0;
};

struct Derivation {
  std::optional<std::pair<Expr, Expr>> goal;
  std::vector<Step> steps;
};

struct Verdict {
  bool accepted = false;
  std::size_t failed_step = 0;  // step id, meaningful when rejected
  std::string reason;
};

// Text format, one item per line ('#' starts a comment):
//
//   goal: <lhs> == <rhs>
//   <id>: <RULE>(<premise ids, comma separated>) <lhs> == <rhs> [path=0.1, ctx=<g>, vars=v w]
//
// The bracketed instantiation is only needed for Cong (path) and CN (ctx,
// vars). Throws MalformedDerivation on anything that does not fit.
Derivation parse_derivation(std::string_view text, ProofSystem system);

// Accepts iff every step is a valid instance of its rule and the last step
// concludes the goal (when one is given). Throws MalformedDerivation for
// dangling premise references or missing instantiation data.
Verdict check(const Derivation& derivation, ProofSystem system);

}  // namespace fractlang
