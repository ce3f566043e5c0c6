#include <gtest/gtest.h>

#include "support.hpp"
#include "tapekit/casebook.hpp"
#include "tapekit/generators.hpp"
#include "tapekit/truth.hpp"

namespace tapekit {
namespace {

const Tape kR0 = Tape::parse(":0");

TruthValue one() { return TruthValue::constant(1, 1); }
TruthValue beta_prime() { return one().with_exception(kR0, 0); }

std::vector<Tape> probe_tapes(std::size_t arity, const std::vector<TruthValue>& vs) {
  std::vector<Tape> out;
  for (const auto& pt : testing::prefix_tapes(arity, arity == 1 ? 6 : 3)) out.push_back(pt.tape);
  for (const auto& v : vs)
    for (const auto& [t, x] : v.exceptions()) out.push_back(t);
  return out;
}

TEST(TruthValue, RejectsMalformedInput) {
  EXPECT_THROW(TruthValue(1, {Cell{{}, rational(3, 2)}}), std::invalid_argument);
  EXPECT_THROW(TruthValue(1, {Cell{{{{0, 0}, true}}, 1}}), std::invalid_argument);
  EXPECT_THROW(TruthValue(1, {Cell{{}, 1}, Cell{{{{0, 0}, true}}, 0}}), std::invalid_argument);
  EXPECT_THROW(TruthValue(1, {Cell{{{{1, 0}, true}}, 1}, Cell{{{{1, 0}, false}}, 1}}), std::invalid_argument);
  EXPECT_THROW(one().with_exception(kR0, -1), std::invalid_argument);
}

TEST(TvEval, SpecExamples) {
  EXPECT_EQ(tv_eval(one(), Tape::parse("0110:(01)*")), 1);
  EXPECT_EQ(tv_eval(beta_prime(), kR0), 0);
  EXPECT_EQ(tv_eval(beta_prime(), Tape::parse("1:0")), 1);
  EXPECT_EQ(tv_eval(build_vn(2).alpha_h(), Tape::parse("01:0")), 1);
  EXPECT_EQ(tv_eval(build_vn(2).alpha_h(), Tape::parse("10:0")), 0);
}

TEST(Heyting, SpecExamples) {
  const auto half = TruthValue::constant(1, rational(1, 2));
  EXPECT_EQ(tv_impl(half, half), one());
  EXPECT_EQ(tv_impl(one(), TruthValue::constant(1, rational(1, 3))), TruthValue::constant(1, rational(1, 3)));
  EXPECT_EQ(tv_impl(TruthValue::constant(1, rational(2, 3)), TruthValue::constant(1, rational(1, 3))),
            TruthValue::constant(1, rational(1, 3)));
  for (std::size_t k : {1, 2, 3}) {
    const VnFixture vn = build_vn(k);
    EXPECT_EQ(tv_meet(vn.alpha_h(), vn.alpha_t()), TruthValue::constant(1, 0)) << k;
  }
}

TEST(Heyting, OperationsActPointwise) {
  gen::Engine g(5);
  for (int n = 0; n < 200; ++n) {
    gen::Settings s;
    s.arity = 1 + gen::below(g, 2);
    const TruthValue a = gen::truth_value(g, s, true);
    const TruthValue b = gen::truth_value(g, s, true);
    const TruthValue meet = tv_meet(a, b), join = tv_join(a, b), impl = tv_impl(a, b);
    for (const auto& t : probe_tapes(s.arity, {a, b})) {
      const Rational x = tv_eval(a, t), y = tv_eval(b, t);
      ASSERT_EQ(tv_eval(meet, t), std::min(x, y));
      ASSERT_EQ(tv_eval(join, t), std::max(x, y));
      ASSERT_EQ(tv_eval(impl, t), x <= y ? Rational(1) : y);
    }
  }
}

TEST(Heyting, AdjunctionInBothOrders) {
  gen::Engine g(17);
  const ProductMeasure m = ProductMeasure::fair();
  std::size_t pointwise_true = 0, as_true = 0;
  for (int n = 0; n < 200; ++n) {
    gen::Settings s;
    const TruthValue a = gen::truth_value(g, s, true);
    const TruthValue b = gen::truth_value(g, s, true);
    const TruthValue c = gen::coin(g) ? tv_meet(gen::truth_value(g, s, true), tv_impl(a, b))
                                      : gen::truth_value(g, s, true);
    const bool pw = tv_leq(tv_meet(a, c), b);
    ASSERT_EQ(pw, tv_leq(c, tv_impl(a, b))) << a.to_string() << " | " << b.to_string() << " | " << c.to_string();
    const bool as = tv_leq_as(tv_meet(a, c), b, m);
    ASSERT_EQ(as, tv_leq_as(c, tv_impl(a, b), m));
    pointwise_true += pw;
    as_true += as;
  }
  EXPECT_GT(pointwise_true, 20U);
  EXPECT_LT(pointwise_true, 200U);
  EXPECT_GE(as_true, pointwise_true);
}

TEST(Order, SpecExamples) {
  const ProductMeasure m = ProductMeasure::fair();
  EXPECT_FALSE(tv_leq(one(), beta_prime()));
  EXPECT_TRUE(tv_leq_as(one(), beta_prime(), m));
  const auto violation = tv_leq_violation(one(), beta_prime());
  ASSERT_TRUE(violation.has_value());
  EXPECT_EQ(violation->tape, kR0);
  EXPECT_EQ(violation->lhs, 1);
  EXPECT_EQ(violation->rhs, 0);

  const TruthValue v = build_vn(2).alpha_h();
  EXPECT_TRUE(tv_leq(v, v));
  EXPECT_TRUE(tv_leq_as(v, v, m));

  const BitPattern one_first{{{0, 0}, true}};
  const auto half = TruthValue::indicator(1, one_first, rational(1, 2));
  const auto quarter = TruthValue::indicator(1, one_first, rational(1, 4));
  EXPECT_FALSE(tv_leq(half, quarter));
  EXPECT_FALSE(tv_leq_as(half, quarter, m));
  const auto as_violation = tv_leq_as_violation(half, quarter, m);
  ASSERT_TRUE(as_violation.has_value());
  EXPECT_EQ(as_violation->lhs, rational(1, 2));
  EXPECT_EQ(as_violation->rhs, rational(1, 4));
  EXPECT_TRUE(as_violation->pattern.refines(one_first));
}

TEST(Order, DegenerateMeasureRejected) {
  ProductMeasure point(1);
  EXPECT_THROW(tv_leq_as(one(), beta_prime(), point), DegenerateMeasureError);
  EXPECT_THROW(as_equiv(one(), one(), point), DegenerateMeasureError);
  ProductMeasure one_bit = ProductMeasure::fair();
  one_bit.set_override({0, 4}, 0);
  EXPECT_THROW(tv_leq_as(one(), one(), one_bit), DegenerateMeasureError);
  EXPECT_FALSE(one_bit.nondegenerate());
}

TEST(Order, AlmostSureOrderIsAPreorderImpliedByPointwise) {
  gen::Engine g(23);
  ProductMeasure m(rational(1, 3));
  for (int n = 0; n < 200; ++n) {
    gen::Settings s;
    const TruthValue a = gen::truth_value(g, s, true);
    const TruthValue b = gen::coin(g) ? tv_join(a, gen::truth_value(g, s, true)) : gen::truth_value(g, s, true);
    const TruthValue c = gen::coin(g) ? tv_join(b, gen::truth_value(g, s, true)) : gen::truth_value(g, s, true);
    ASSERT_TRUE(tv_leq_as(a, a, m));
    ASSERT_TRUE(as_equiv(a, a, m));
    if (tv_leq(a, b)) ASSERT_TRUE(tv_leq_as(a, b, m));
    if (tv_leq_as(a, b, m) && tv_leq_as(b, c, m)) ASSERT_TRUE(tv_leq_as(a, c, m));
    ASSERT_EQ(as_equiv(a, b, m), as_equiv(b, a, m));
    ASSERT_EQ(as_equiv(a, b, m), tv_leq_as(a, b, m) && tv_leq_as(b, a, m));
    if (as_equiv(a, b, m) && as_equiv(b, c, m)) ASSERT_TRUE(as_equiv(a, c, m));
    ASSERT_TRUE(as_equiv(a, a.without_exceptions(), m));
  }
}

TEST(AsEquiv, SpecExamples) {
  const ProductMeasure m = ProductMeasure::fair();
  EXPECT_TRUE(as_equiv(one(), beta_prime(), m));
  EXPECT_FALSE(one() == beta_prime());
  const TruthValue v = build_vn(3).alpha_t();
  EXPECT_TRUE(as_equiv(v, v, m));
  const auto on_zero = TruthValue::indicator(1, {{{0, 0}, false}}, rational(1, 2));
  const auto on_one = TruthValue::indicator(1, {{{0, 0}, true}}, rational(1, 2));
  EXPECT_FALSE(as_equiv(on_zero, on_one, m));
}

TEST(EssentialBounds, SpecExamples) {
  const TruthValue v = build_vn(2).alpha_h().with_exception(Tape::parse("01:0"), 0);
  EXPECT_EQ(ess_sup({v}), v.without_exceptions());
  EXPECT_TRUE(ess_sup({v}).exceptions().empty());
  EXPECT_EQ(ess_sup({one(), beta_prime()}), one());
  const VnFixture vn = build_vn(2);
  EXPECT_EQ(ess_inf({vn.alpha_h(), vn.alpha_t()}), TruthValue::constant(1, 0));
  EXPECT_THROW(ess_sup({}), std::invalid_argument);
  EXPECT_THROW(ess_inf({}), std::invalid_argument);
}

TEST(EssentialBounds, AreLeastAndGreatestBounds) {
  gen::Engine g(41);
  const ProductMeasure m = ProductMeasure::fair();
  for (int n = 0; n < 100; ++n) {
    gen::Settings s;
    std::vector<TruthValue> family;
    for (std::size_t i = 0; i < 1 + gen::below(g, 4); ++i) family.push_back(gen::truth_value(g, s, true));
    const TruthValue sup = ess_sup(family), inf = ess_inf(family);
    TruthValue upper = family.front(), lower = family.front();
    for (const auto& v : family) {
      ASSERT_TRUE(tv_leq_as(v, sup, m));
      ASSERT_TRUE(tv_leq_as(inf, v, m));
      upper = tv_join(upper, v);
      lower = tv_meet(lower, v);
    }
    const TruthValue bump = gen::truth_value(g, s, false);
    ASSERT_TRUE(tv_leq_as(sup, tv_join(upper, bump), m));
    ASSERT_TRUE(tv_leq_as(tv_meet(lower, bump), inf, m));
    ASSERT_TRUE(as_equiv(sup, upper, m));
    ASSERT_TRUE(as_equiv(inf, lower, m));
  }
}

TEST(Pullback, SpecExamples) {
  gen::Engine g(3);
  const TruthValue v = gen::truth_value(g, gen::Settings{}, true);
  EXPECT_EQ(tv_pullback(TapeMapSpec::identity(), v), v);
  for (std::size_t k : {1, 2, 3}) {
    const VnFixture vn = build_vn(k);
    EXPECT_EQ(tv_pullback(TapeMapSpec::flip(), vn.alpha_h()), vn.alpha_t()) << k;
  }
  const TruthValue second_first = TruthValue::indicator(2, {{{1, 0}, true}}, 1);
  const TruthValue pulled = tv_pullback(TapeMapSpec::split(2), second_first);
  EXPECT_EQ(pulled, TruthValue::indicator(1, {{{0, 1}, true}}, 1));
  EXPECT_EQ(tv_eval(pulled, Tape::parse("01:0")), 1);
  EXPECT_EQ(tv_eval(pulled, Tape::parse("10:0")), 0);
}

TEST(Pullback, ExceptionsWithoutRepresentativeAreNoted) {
  const TruthValue v = one().with_exception(kR0, 0);
  const TruthValue dropped = tv_pullback(TapeMapSpec::drop(2), v);
  EXPECT_EQ(dropped.exceptions().size(), 4U);
  EXPECT_EQ(tv_eval(dropped, Tape::parse("10:0")), 0);
  EXPECT_EQ(tv_eval(dropped, Tape::parse("101:0")), 1);
  const TruthValue projected = tv_pullback(TapeMapSpec::projection(2, 0), v);
  EXPECT_EQ(projected.arity(), 2U);
  EXPECT_TRUE(projected.exceptions().empty());
  EXPECT_FALSE(projected.notes().empty());
  const TruthValue flipped = tv_pullback(TapeMapSpec::flip(), v);
  ASSERT_EQ(flipped.exceptions().size(), 1U);
  EXPECT_EQ(tv_eval(flipped, Tape::parse(":1")), 0);
  EXPECT_EQ(tv_eval(flipped, kR0), 1);
}

TEST(Pullback, MonotoneAndCommutesWithOperations) {
  gen::Engine g(59);
  const std::vector<TapeMapSpec> maps{TapeMapSpec::identity(), TapeMapSpec::flip(), TapeMapSpec::drop(1),
                                      TapeMapSpec::drop(3),    TapeMapSpec::split(2), TapeMapSpec::block(2)};
  for (const auto& k : maps) {
    for (int n = 0; n < 60; ++n) {
      gen::Settings s;
      s.arity = k.dst_arity();
      const TruthValue a = gen::truth_value(g, s, false);
      const TruthValue b = gen::coin(g) ? tv_join(a, gen::truth_value(g, s, false)) : gen::truth_value(g, s, false);
      const TruthValue pa = tv_pullback(k, a), pb = tv_pullback(k, b);
      if (tv_leq(a, b)) ASSERT_TRUE(tv_leq(pa, pb)) << k.name();
      ASSERT_EQ(tv_pullback(k, tv_meet(a, b)), tv_meet(pa, pb)) << k.name();
      ASSERT_EQ(tv_pullback(k, tv_join(a, b)), tv_join(pa, pb)) << k.name();
      ASSERT_EQ(tv_pullback(k, tv_impl(a, b)), tv_impl(pa, pb)) << k.name();
      for (const auto& pt : testing::prefix_tapes(1, 6))
        ASSERT_EQ(tv_eval(pa, pt.tape), tv_eval(a, apply_tapemap(k, pt.tape))) << k.name();
    }
  }
}

}  // namespace
}  // namespace tapekit
