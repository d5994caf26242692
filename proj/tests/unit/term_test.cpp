#include <gtest/gtest.h>

#include "fractlang/error.hpp"
#include "fractlang/parser.hpp"
#include "fractlang/term.hpp"
#include "generators.hpp"

namespace fl = fractlang;
using fl::Expr;
using fl::NodeKind;

namespace {

Expr classic(std::string_view s) { return fl::parse_expr(s, fl::Flavor::kClassic); }
Expr prob(std::string_view s) { return fl::parse_expr(s, fl::Flavor::kProbabilistic); }
Expr open_term(std::string_view s) { return fl::parse_expr(s, fl::Flavor::kClassic, {false, true}); }

}  // namespace

TEST(Parse, SumsAssociateLeftUnderMu) {
  const Expr e = classic("mu v. (a.v + b.v + c.v)");
  ASSERT_EQ(e.kind(), NodeKind::kMu);
  EXPECT_EQ(e.name(), "v");
  const Expr& s = e.body();
  ASSERT_EQ(s.kind(), NodeKind::kSum);
  ASSERT_EQ(s.lhs().kind(), NodeKind::kSum);
  EXPECT_EQ(s.lhs().lhs().name(), "a");
  EXPECT_EQ(s.lhs().rhs().name(), "b");
  EXPECT_EQ(s.rhs().name(), "c");
  EXPECT_EQ(s.rhs().body().kind(), NodeKind::kBoundVar);
  EXPECT_EQ(s.rhs().body().index(), 0u);
}

TEST(Parse, UnguardedVariable) {
  try {
    classic("mu v. v");
    FAIL();
  } catch (const fl::WellFormednessError& e) {
    EXPECT_EQ(e.kind(), fl::WellFormedness::kUnguarded);
    EXPECT_EQ(e.variable(), "v");
  }
}

TEST(Parse, GuardMustBeInsideTheBinder) {
  EXPECT_THROW(classic("mu w. a.(mu v. v)"), fl::WellFormednessError);
  EXPECT_NO_THROW(classic("mu w. mu v. a.(v + w)"));
}

TEST(Parse, FreeVariable) {
  try {
    classic("a.w");
    FAIL();
  } catch (const fl::WellFormednessError& e) {
    EXPECT_EQ(e.kind(), fl::WellFormedness::kFreeVariable);
    EXPECT_EQ(e.variable(), "w");
    EXPECT_EQ(e.position().line, 1u);
    EXPECT_EQ(e.position().column, 3u);
  }
}

TEST(Parse, SyntaxErrorCarriesPositionAndExpectations) {
  try {
    classic("mu v. a.v +\n  )");
    FAIL();
  } catch (const fl::SyntaxError& e) {
    EXPECT_EQ(e.position().line, 2u);
    EXPECT_EQ(e.position().column, 3u);
    EXPECT_FALSE(e.expected().empty());
    EXPECT_EQ(e.found(), "')'");
  }
  EXPECT_THROW(classic("mu . a.v"), fl::SyntaxError);
  EXPECT_THROW(classic("mu v. a.v +[1/2] b.v"), fl::SyntaxError);
  EXPECT_THROW(prob("mu v. a.v + b.v"), fl::SyntaxError);
  EXPECT_THROW(classic(""), fl::SyntaxError);
}

TEST(Parse, ProbabilisticChoice) {
  const Expr e = prob("mu v. (a.v +[1/3] b.v)");
  ASSERT_EQ(e.body().kind(), NodeKind::kChoice);
  EXPECT_EQ(e.body().probability(), fl::Rational(1, 3));
  EXPECT_EQ(e.body().lhs().name(), "a");
  EXPECT_EQ(prob("mu v. a.v +[0.25] b.v").body().probability(), fl::Rational(1, 4));
  EXPECT_EQ(prob("mu v. a.v +[1] b.v").body().probability(), fl::Rational(1));
}

TEST(Parse, ProbabilityOutOfRange) {
  EXPECT_THROW(prob("a.v +[3/2] b.v"), fl::ProbabilityRangeError);
  EXPECT_THROW(prob("mu v. a.v +[-1/2] b.v"), fl::ProbabilityRangeError);
  EXPECT_THROW(prob("mu v. a.v +[1/0] b.v"), fl::SyntaxError);
}

TEST(Parse, MuAsLastSummand) {
  const Expr e = prob("mu v. a.v +[1/2] mu w. b.w");
  ASSERT_EQ(e.kind(), NodeKind::kMu);
  ASSERT_EQ(e.body().kind(), NodeKind::kChoice);
  EXPECT_EQ(e.body().rhs().kind(), NodeKind::kMu);
  EXPECT_NO_THROW(fl::PTerm{e});
}

TEST(Parse, CommentsAndWhitespace) {
  EXPECT_TRUE(fl::alpha_eq(classic("# loop\nmu v .\n  a . v  # tail\n"), classic("mu v. a.v")));
}

TEST(Parse, ActionLabels) {
  EXPECT_TRUE(fl::is_action_label("a1"));
  EXPECT_FALSE(fl::is_action_label("1a"));
  EXPECT_FALSE(fl::is_action_label("A"));
  EXPECT_FALSE(fl::is_action_label(""));
}

TEST(Term, RejectsWrongFlavor) {
  EXPECT_THROW(fl::Term{prob("mu v. a.v +[1/2] b.v")}, std::invalid_argument);
  EXPECT_THROW(fl::PTerm{classic("mu v. a.v + b.v")}, std::invalid_argument);
}

TEST(Alpha, BinderNamesDoNotMatter) {
  EXPECT_TRUE(fl::alpha_eq(classic("mu v. a.v"), classic("mu w. a.w")));
  EXPECT_FALSE(fl::alpha_eq(classic("mu v. a.v"), classic("mu v. b.v")));
  EXPECT_FALSE(fl::alpha_eq(classic("mu w. mu v. (a1.a2.v + a1.a3.w)"), classic("mu v. a1.(a2.v + a3.v)")));
  EXPECT_FALSE(fl::alpha_eq(classic("mu w. mu v. a.(v + w)"), classic("mu w. mu v. a.(w + v)")));
  EXPECT_EQ(classic("mu v. a.v").hash(), classic("mu w. a.w").hash());
}

TEST(Substitute, ReplacesFreeOccurrences) {
  const Expr r = fl::substitute(open_term("a.v"), classic("mu w. b.w"), "v");
  EXPECT_TRUE(fl::alpha_eq(r, classic("a.(mu w. b.w)")));
}

TEST(Substitute, BinderShadows) {
  const Expr e = classic("mu v. a.v");
  EXPECT_TRUE(fl::alpha_eq(fl::substitute(e, classic("mu u. c.u"), "v"), e));
}

TEST(Substitute, AvoidsCapture) {
  // (mu w. a.v + b.w)[c.w / v] must not capture the substituted w.
  const Expr e = open_term("mu w. a.v + b.w");
  const Expr g = fl::parse_expr("c.w", fl::Flavor::kClassic, {false, false});
  const Expr r = fl::substitute(e, g, "v");
  const Expr expected = open_term("mu u. a.c.w + b.u");
  EXPECT_TRUE(fl::alpha_eq(r, expected));
  EXPECT_EQ(fl::free_vars(r), std::set<std::string>{"w"});
  // The printed form renames the binder and reparses to the same term.
  const std::string text = fl::to_string(r);
  EXPECT_TRUE(fl::alpha_eq(open_term(text), r)) << text;
}

TEST(Unfold, OneStep) {
  EXPECT_TRUE(fl::alpha_eq(fl::unfold(classic("mu v. a.v")), classic("a.(mu v. a.v)")));
  const Expr e1 = classic("mu w. mu v. (a1.a2.v + a1.a3.w)");
  EXPECT_TRUE(fl::alpha_eq(fl::unfold(e1), classic("mu v. (a1.a2.v + a1.a3.(mu w. mu v. (a1.a2.v + a1.a3.w)))")));
}

TEST(Paths, SubtermAndReplace) {
  const Expr e = classic("a.b.(mu v. c.v) + d.(mu v. c.v)");
  const fl::Path p{0, 0};
  EXPECT_TRUE(fl::alpha_eq(fl::subterm_at(e, p), classic("b.(mu v. c.v)")));
  EXPECT_FALSE(fl::subterm_at(e, fl::Path{0, 1}));
  const Expr r = fl::replace_at(e, p, classic("e.(mu v. c.v)"));
  EXPECT_TRUE(fl::alpha_eq(r, classic("a.e.(mu v. c.v) + d.(mu v. c.v)")));
  EXPECT_THROW(fl::replace_at(e, fl::Path{1, 1}, e), std::out_of_range);
}

TEST(Print, RoundTripsRandomTerms) {
  fl::testing::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const bool p = i % 2 == 1;
    const Expr e = fl::testing::random_term(rng, 1 + i % 30, 3, p);
    ASSERT_FALSE(fl::find_violation(e)) << fl::to_string(e);
    const std::string text = fl::to_string(e);
    const Expr back = p ? prob(text) : classic(text);
    EXPECT_TRUE(fl::alpha_eq(back, e)) << text;
    EXPECT_EQ(fl::to_string(back), text);
  }
}

TEST(Print, Canonical) {
  EXPECT_EQ(fl::to_string(classic("mu v. (a.v + (b.v + c.v))")), "mu v. a.v + (b.v + c.v)");
  EXPECT_EQ(fl::to_string(classic("mu v. a.(b.v + c.v)")), "mu v. a.(b.v + c.v)");
  EXPECT_EQ(fl::to_string(prob("mu v. a.v +[2/4] b.v")), "mu v. a.v +[1/2] b.v");
}
