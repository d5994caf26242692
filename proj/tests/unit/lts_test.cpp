#include <gtest/gtest.h>

#include "fractlang/error.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/parser.hpp"
#include "generators.hpp"

namespace fl = fractlang;

namespace {

fl::Term classic(std::string_view s) { return fl::parse_term(s); }
fl::PTerm prob(std::string_view s) { return fl::parse_pterm(s); }

}  // namespace

TEST(Step, Prefix) {
  const auto s = fl::step(classic("a.(mu v. b.v)"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].action, "a");
  EXPECT_EQ(s[0].target, classic("mu v. b.v"));
}

TEST(Step, UnfoldsMu) {
  const auto s = fl::step(classic("mu v. a.v"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].target, classic("mu v. a.v"));
}

TEST(Step, TwoLoopsRootSuccessors) {
  const fl::Term e1 = classic("mu w. mu v. (a1.a2.v + a1.a3.w)");
  const fl::Term f1 = classic("mu v. (a1.a2.v + a1.a3.(mu w. mu v. (a1.a2.v + a1.a3.w)))");
  const auto s = fl::step(e1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].action, "a1");
  EXPECT_EQ(s[0].target, fl::Term(fl::Expr::prefix("a2", f1.expr())));
  EXPECT_EQ(s[1].action, "a1");
  EXPECT_EQ(s[1].target, fl::Term(fl::Expr::prefix("a3", e1.expr())));
}

TEST(Step, DuplicatesCollapse) {
  EXPECT_EQ(fl::step(classic("mu v. a.v + a.v")).size(), 1u);
}

TEST(StepProb, PrefixIsDirac) {
  const auto s = fl::step_prob(prob("a.(mu v. b.v)"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].probability, 1);
}

TEST(StepProb, SelfMixture) {
  const fl::PTerm e = prob("mu v. a.v +[1/3] b.v");
  const fl::PTerm mixed(fl::Expr::choice(e.expr(), fl::Rational(1, 2), e.expr()));
  const auto a = fl::step_prob(e);
  const auto b = fl::step_prob(mixed);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].action, b[i].action);
    EXPECT_EQ(a[i].target, b[i].target);
    EXPECT_EQ(a[i].probability, b[i].probability);
  }
}

TEST(StepProb, LoopWeights) {
  const fl::PTerm e = prob("mu v. (a.v +[1/3] b.v)");
  const auto s = fl::step_prob(e);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].action, "a");
  EXPECT_EQ(s[0].probability, fl::Rational(1, 3));
  EXPECT_EQ(s[0].target, e);
  EXPECT_EQ(s[1].action, "b");
  EXPECT_EQ(s[1].probability, fl::Rational(2, 3));
  EXPECT_EQ(s[1].target, e);
}

TEST(StepProb, ZeroWeightDropped) {
  const auto s = fl::step_prob(prob("mu v. a.v +[1] b.v"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].action, "a");
}

TEST(Unfold, TwoLoopsDiagrams) {
  const fl::Lts l1 = fl::unfold(classic("mu w. mu v. (a1.a2.v + a1.a3.w)"));
  EXPECT_EQ(l1.size(), 4u);
  EXPECT_EQ(l1.num_edges(), 6u);
  const fl::Lts l2 = fl::unfold(classic("mu v. a1.(a2.v + a3.v)"));
  EXPECT_EQ(l2.size(), 2u);
  EXPECT_EQ(l2.num_edges(), 3u);
  ASSERT_EQ(l2.transitions(1).size(), 2u);
  EXPECT_EQ(l2.transitions(1)[0].target, 0u);
  EXPECT_EQ(l2.transitions(1)[1].target, 0u);
}

TEST(Unfold, SelfLoop) {
  const fl::Lts l = fl::unfold(classic("mu v. a.v"));
  EXPECT_EQ(l.size(), 1u);
  ASSERT_EQ(l.num_edges(), 1u);
  EXPECT_EQ(l.transitions(0)[0].target, 0u);
}

TEST(Unfold, AlphaVariantsShareStates) {
  const fl::Lts l = fl::unfold(classic("a.(mu v. b.v) + c.(mu w. b.w)"));
  EXPECT_EQ(l.size(), 2u);
}

TEST(Unfold, StateBudget) {
  EXPECT_THROW(fl::unfold(classic("mu w. mu v. (a1.a2.v + a1.a3.w)"), 3), fl::StateBudgetExceeded);
}

TEST(Unfold, ProbabilisticRowsSumToOne) {
  fl::testing::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const fl::PTerm e(fl::testing::random_term(rng, 1 + i % 25, 3, true));
    const fl::Lmc m = fl::unfold_prob(e);
    for (std::size_t x = 0; x < m.size(); ++x) {
      fl::Rational total = 0;
      for (const auto& t : m.transitions(x)) {
        EXPECT_GT(t.probability, 0);
        total += t.probability;
      }
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(Unfold, RandomTermsAreProductive) {
  fl::testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const fl::Term e(fl::testing::random_term(rng, 1 + i % 30, 3, false));
    const fl::Lts l = fl::unfold(e);
    for (std::size_t x = 0; x < l.size(); ++x) EXPECT_FALSE(l.transitions(x).empty());
  }
}

TEST(Lts, FromEdgesValidates) {
  EXPECT_THROW(fl::Lts::from_edges(2, {{0, "a", 1}}), std::invalid_argument);  // state 1 stuck
  EXPECT_THROW(fl::Lts::from_edges(2, {{0, "a", 0}, {1, "a", 1}}), std::invalid_argument);  // unreachable
  EXPECT_THROW(fl::Lts::from_edges(1, {{0, "a", 3}}), std::invalid_argument);
  EXPECT_NO_THROW(fl::Lts::from_edges(1, {{0, "a", 0}}));
}

TEST(Lmc, FromEdgesValidates) {
  using R = fl::Rational;
  EXPECT_THROW(fl::Lmc::from_edges(1, {{0, "a", 0, R(1, 2)}}), std::invalid_argument);
  EXPECT_THROW(fl::Lmc::from_edges(1, {{0, "a", 0, R(3, 2)}, {0, "b", 0, R(-1, 2)}}), std::invalid_argument);
  const fl::Lmc m = fl::Lmc::from_edges(1, {{0, "a", 0, R(1, 2)}, {0, "a", 0, R(1, 2)}, {0, "b", 0, R(0)}});
  ASSERT_EQ(m.transitions(0).size(), 1u);
  EXPECT_EQ(m.transitions(0)[0].probability, 1);
}

TEST(Text, RoundTrip) {
  const fl::Lts l = fl::unfold(classic("mu w. mu v. (a1.a2.v + a1.a3.w)"));
  const fl::Lts back = fl::lts_from_text(fl::to_text(l));
  EXPECT_EQ(fl::to_text(back), fl::to_text(l));
  const fl::Lmc m = fl::unfold_prob(prob("mu v. a.v +[1/3] b.(mu w. c.w)"));
  const fl::Lmc mback = fl::lmc_from_text(fl::to_text(m));
  EXPECT_EQ(fl::to_text(mback), fl::to_text(m));
}

TEST(Text, Errors) {
  EXPECT_THROW(fl::lts_from_text("edge 0 a"), fl::Error);
  EXPECT_THROW(fl::lts_from_text("edge 0 a 0 1/2"), fl::Error);
  EXPECT_THROW(fl::lmc_from_text("edge 0 a 0"), fl::Error);
  EXPECT_THROW(fl::lts_from_text("bogus"), fl::Error);
}
