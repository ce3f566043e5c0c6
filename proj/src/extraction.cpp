#include "tapekit/extraction.hpp"

namespace tapekit {

Rational expect(const TruthValue& v, const ProductMeasure& m) {
  if (!v.exceptions().empty()) require_nondegenerate(m, "expectation of a truth value with exceptions");
  Rational total = 0;
  for (const auto& c : v.cells()) total += c.value * pattern_measure(m, c.pattern);
  return total;
}

FinDist law(const TraceTree& t, const ProductMeasure& m) {
  std::map<Label, Rational> masses;
  for (const auto& leaf : t.leaves()) masses[leaf.outcome.label()] += pattern_measure(m, leaf.path);
  return FinDist(std::move(masses));
}

const Outcome& PatchedComputation::at(const Tape& t) const {
  if (auto it = patches.find(t); it != patches.end()) return it->second;
  return tree.follow(t);
}

FinDist law(const PatchedComputation& c, const ProductMeasure& m) {
  if (!c.patches.empty()) require_nondegenerate(m, "law of a patched computation");
  return law(c.tree, m);
}

TruthValue diamond(const PatchedComputation& c, const Proposition& psi, std::size_t arity) {
  TruthValue v = diamond(c.tree, psi, arity);
  for (const auto& [t, o] : c.patches) v = v.with_exception(t, o.is_bottom() ? Rational(0) : tv_eval(psi.at(o.code(), arity), t));
  return v;
}

ExtractionReport extraction_soundness(const EntailmentJudgment& j, const ProductMeasure& m) {
  ExtractionReport r{m, j.holds, {}, true};
  const TapeSpace space(j.arity);
  for (const auto& c : j.universe) {
    Rational lhs = expect(j.phi.at(c, j.arity), m);
    Rational rhs = expect(diamond(mca_apply(j.evidence, c, space, j.fuel), j.psi, j.arity), m);
    if (lhs > rhs) r.sound = false;
    r.rows.push_back(ExtractionRow{c, lhs, rhs});
  }
  return r;
}

bool prob_one_collapse(const TruthValue& v, const ProductMeasure& m) {
  require_nondegenerate(m, "probability-one collapse");
  for (const auto& c : v.cells()) {
    if (c.value != 1 && pattern_measure(m, c.pattern) > 0) return false;
  }
  return true;
}

ReindexCheck check_extract_reindex(const TapeMapSpec& k, const TruthValue& v, const ProductMeasure& m) {
  return ReindexCheck{expect(tv_pullback(k, v), m), expect(v, pushforward_measure(k, m))};
}

namespace {

std::map<std::string, Code> value_codes(const TraceTree& t) {
  std::map<std::string, Code> out;
  for (const auto& leaf : t.leaves()) {
    if (leaf.outcome.is_value()) out.emplace(*leaf.outcome.label(), leaf.outcome.code());
  }
  return out;
}

}  // namespace

bool check_law_split_seq(const TraceTree& t, const Continuation& f, const TapeMapSpec& split,
                         const ProductMeasure& m) {
  const ProductMeasure pushed = pushforward_measure(split, m);
  const ProductMeasure first = pushed.marginal(0);
  const ProductMeasure second = pushed.marginal(1);
  const auto codes = value_codes(t);
  FinDist composed = dist_bind(law(t, first), [&](const std::string& x) { return law(f(codes.at(x)), second); });
  return law(bind_split(t, f, split), m) == composed;
}

bool check_law_plain_seq(const TraceTree& t, const Continuation& f, const ProductMeasure& m) {
  const auto codes = value_codes(t);
  FinDist composed = dist_bind(law(t, m), [&](const std::string& x) { return law(f(codes.at(x)), m); });
  return law(monad_bind(t, f), m) == composed;
}

BridgeCheck bridge_prob_one(const PatchedComputation& c, const std::set<Code>& accept, std::size_t arity,
                            const ProductMeasure& m) {
  std::set<std::string> labels;
  for (const auto& x : accept) labels.insert(x.label());
  return BridgeCheck{prob_one_collapse(diamond(c, Proposition::crisp(accept), arity), m), must(law(c, m), labels)};
}

}  // namespace tapekit
