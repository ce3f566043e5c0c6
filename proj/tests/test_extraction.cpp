#include <gtest/gtest.h>

#include "support.hpp"
#include "tapekit/casebook.hpp"
#include "tapekit/extraction.hpp"
#include "tapekit/generators.hpp"

namespace tapekit {
namespace {

const Code H = Code::con("H");
const Code T = Code::con("T");

TruthValue beta_prime() { return TruthValue::constant(1, 1).with_exception(Tape::parse(":0"), 0); }

/// Expectation by summing the truth value over every depth-`depth` prefix.
/// Exception tapes are null, so they are skipped even when a probe hits one.
Rational oracle_expect(const TruthValue& v, std::size_t arity, std::size_t depth, const ProductMeasure& m) {
  const TruthValue cells = v.without_exceptions();
  Rational sum = 0;
  for (const auto& pt : testing::prefix_tapes(arity, depth))
    sum += testing::prefix_weight(m, pt.prefix) * tv_eval(cells, pt.tape);
  return sum;
}

TEST(Expect, SpecExamples) {
  const ProductMeasure fair = ProductMeasure::fair();
  EXPECT_EQ(expect(TruthValue::constant(1, rational(2, 7)), fair), rational(2, 7));
  const VnFixture vn = build_vn(2);
  EXPECT_EQ(expect(vn.alpha_h(), fair), rational(3, 8));
  EXPECT_EQ(oracle_expect(vn.alpha_h(), 1, 4, fair), rational(3, 8));
  EXPECT_EQ(expect(beta_prime(), fair), 1);
  EXPECT_THROW(expect(beta_prime(), ProductMeasure(0)), DegenerateMeasureError);
  EXPECT_EQ(expect(TruthValue::indicator(1, {{{0, 0}, true}}, 1), ProductMeasure(0)), 0);
}

TEST(Expect, AgreesWithPrefixSumAndIsMonotone) {
  gen::Engine g(8);
  const ProductMeasure m(rational(1, 3));
  std::size_t comparable = 0;
  for (int n = 0; n < 200; ++n) {
    gen::Settings s;
    const TruthValue a = gen::truth_value(g, s, true);
    const TruthValue b = gen::coin(g) ? tv_join(a, gen::truth_value(g, s, true)) : gen::truth_value(g, s, true);
    ASSERT_EQ(expect(a, m), oracle_expect(a, 1, 6, m)) << a.to_string();
    if (tv_leq(a, b)) {
      ++comparable;
      ASSERT_LE(expect(a, m), expect(b, m));
    }
    if (tv_leq_as(a, b, m)) ASSERT_LE(expect(a, m), expect(b, m));
  }
  EXPECT_GT(comparable, 50U);
}

TEST(Expect, IncompleteWitness) {
  const TruthValue a = TruthValue::indicator(1, {{{0, 0}, false}}, 1);
  const TruthValue b = TruthValue::indicator(1, {{{0, 0}, true}}, 1);
  const ProductMeasure fair = ProductMeasure::fair();
  EXPECT_LE(expect(a, fair), expect(b, fair));
  EXPECT_FALSE(tv_leq(a, b));
  EXPECT_FALSE(tv_leq_as(a, b, fair));
}

TEST(Law, SpecExamples) {
  EXPECT_EQ(law(TraceTree::leaf(Outcome::value(H)), ProductMeasure::fair()), FinDist::dirac("H"));
  const TraceTree read = trace(Code::read(0, 0), TapeSpace(1), 10);
  EXPECT_EQ(law(read, ProductMeasure(rational(2, 5))), FinDist({{"#0", rational(3, 5)}, {"#1", rational(2, 5)}}));
  for (std::size_t k = 1; k <= 6; ++k) {
    const VnFixture vn = build_vn(k);
    const Rational bottom = Rational(1) / Rational(std::uint64_t{1} << k);
    const FinDist expected({{"H", (1 - bottom) / 2}, {"T", (1 - bottom) / 2}, {std::nullopt, bottom}});
    EXPECT_EQ(law(vn.trace(), ProductMeasure::fair()), expected) << k;
    const auto oracle = testing::oracle_law(vn.code, 1, 2 * k, vn.fuel, ProductMeasure::fair());
    EXPECT_EQ(FinDist(oracle), expected) << k;
  }
}

TEST(Law, MassesSumToOneAndMatchCrispExpectation) {
  gen::Engine g(12);
  const auto pool = gen::outcome_pool();
  for (int n = 0; n < 200; ++n) {
    gen::Settings s;
    s.arity = 1 + gen::below(g, 2);
    const TraceTree t = gen::tree(g, s, pool);
    const ProductMeasure m(gen::unit_rational(g));
    const FinDist d = law(t, m);
    Rational total = 0;
    for (const auto& [x, p] : d.masses()) {
      ASSERT_GT(p, 0);
      total += p;
    }
    ASSERT_EQ(total, 1);
    if (n >= 50) continue;
    std::set<Code> accept;
    Rational accepted = 0;
    for (const auto& x : pool) {
      if (!gen::coin(g)) continue;
      accept.insert(x);
      accepted += d.mass(x.label());
    }
    ASSERT_EQ(expect(diamond(t, Proposition::crisp(accept), s.arity), m), accepted);
  }
}

TEST(ExtractionSoundness, SpecExamples) {
  const ProductMeasure fair = ProductMeasure::fair();
  const VnFixture vn = build_vn(2);
  const auto failing =
      check_entailment(Proposition::constant(TruthValue::constant(1, 1)), vn.wrapper(), Proposition::crisp({H, T}),
                       {Code::con("C")}, 1, vn.fuel + 1, Mode::Pointwise);
  const ExtractionReport negative = extraction_soundness(failing, fair);
  EXPECT_FALSE(negative.judgment_holds);
  ASSERT_EQ(negative.rows.size(), 1U);
  EXPECT_EQ(negative.rows[0].lhs, 1);
  EXPECT_EQ(negative.rows[0].rhs, rational(3, 4));

  const MajorityFixture maj = build_majority(3, 2, default_base_verifier(), {Code::bit(true)});
  const ExtractionReport r = extraction_soundness(maj.judgment(), ProductMeasure(rational(2, 3)));
  EXPECT_TRUE(r.judgment_holds);
  EXPECT_TRUE(r.sound);
  for (const auto& row : r.rows) EXPECT_LE(row.lhs, row.rhs);

  const Proposition psi = Proposition::crisp({H});
  const TruthValue d = diamond(mca_apply(vn.wrapper(), Code::con("C"), TapeSpace(1), vn.fuel + 1), psi, 1);
  const auto reflexive = check_entailment(Proposition::constant(d), vn.wrapper(), psi, {Code::con("C")}, 1,
                                          vn.fuel + 1, Mode::Pointwise);
  const ExtractionReport eq = extraction_soundness(reflexive, fair);
  ASSERT_TRUE(eq.sound);
  EXPECT_EQ(eq.rows[0].lhs, eq.rows[0].rhs);
  EXPECT_EQ(eq.rows[0].rhs, rational(3, 8));
}

TEST(ProbOneCollapse, SpecExamples) {
  const ProductMeasure fair = ProductMeasure::fair();
  EXPECT_TRUE(prob_one_collapse(TruthValue::constant(1, 1), fair));
  EXPECT_TRUE(prob_one_collapse(beta_prime(), fair));
  for (std::size_t k : {1, 2, 5}) EXPECT_FALSE(prob_one_collapse(build_vn(k).alpha_h(), fair));
  EXPECT_THROW(prob_one_collapse(beta_prime(), ProductMeasure(1)), DegenerateMeasureError);
}

TEST(ExtractReindex, SpecExamples) {
  const ProductMeasure fair = ProductMeasure::fair();
  gen::Engine g(2);
  const TruthValue v = gen::truth_value(g, gen::Settings{}, false);
  EXPECT_TRUE(check_extract_reindex(TapeMapSpec::identity(), v, fair).equal());
  const ReindexCheck flip = check_extract_reindex(TapeMapSpec::flip(), build_vn(2).alpha_h(), fair);
  EXPECT_EQ(flip.source_side, rational(3, 8));
  EXPECT_EQ(flip.destination_side, rational(3, 8));
  const TruthValue rect = TruthValue::indicator(2, {{{0, 0}, true}, {{1, 1}, false}}, 1);
  const ReindexCheck split = check_extract_reindex(TapeMapSpec::split(2), rect, fair);
  EXPECT_EQ(split.source_side, rational(1, 4));
  EXPECT_EQ(split.destination_side, rational(1, 4));
}

TEST(ExtractReindex, HoldsOnBuiltinMapsAndBiasedMeasures) {
  gen::Engine g(61);
  const std::vector<TapeMapSpec> maps{TapeMapSpec::identity(), TapeMapSpec::flip(), TapeMapSpec::drop(2),
                                      TapeMapSpec::split(2), TapeMapSpec::split(3)};
  EXPECT_THROW(check_extract_reindex(TapeMapSpec::block(2), TruthValue::constant(1, 1), ProductMeasure::fair()),
               UnsupportedError);
  for (const auto& k : maps) {
    for (int n = 0; n < 40; ++n) {
      gen::Settings s;
      s.arity = k.dst_arity();
      const TruthValue v = gen::truth_value(g, s, false);
      ProductMeasure m(gen::unit_rational(g));
      if (gen::coin(g)) m.set_override(gen::address(g, 1, 5), gen::unit_rational(g));
      const ReindexCheck c = check_extract_reindex(k, v, m);
      ASSERT_TRUE(c.equal()) << k.name() << " " << v.to_string() << ": " << c.source_side << " vs "
                             << c.destination_side;
    }
  }
}

}  // namespace
}  // namespace tapekit
