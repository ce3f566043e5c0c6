#pragma once

// Numeric extraction: expectations of truth values, laws of computations and
// the checks relating tape-level and law-level reasoning.

#include <map>
#include <set>
#include <vector>

#include "tapekit/dist.hpp"
#include "tapekit/modality.hpp"
#include "tapekit/trace_tree.hpp"
#include "tapekit/truth.hpp"

namespace tapekit {

/// Integral of v under m. Exceptions contribute nothing; when v has any, m
/// must be nondegenerate (DegenerateMeasureError otherwise).
Rational expect(const TruthValue& v, const ProductMeasure& m);

/// The pushforward of m along the computation: mass of each outcome label.
FinDist law(const TraceTree& t, const ProductMeasure& m);

/// A trace tree whose outcome is overridden on finitely many tapes. The
/// overrides are null events under nondegenerate measures.
struct PatchedComputation {
  TraceTree tree;
  std::map<Tape, Outcome> patches;

  const Outcome& at(const Tape& t) const;
};

/// The law ignores the patches; m must be nondegenerate when any exist.
FinDist law(const PatchedComputation& c, const ProductMeasure& m);
/// diamond of the tree with one exception per patched tape.
TruthValue diamond(const PatchedComputation& c, const Proposition& psi, std::size_t arity);

struct ExtractionRow {
  Code code;
  Rational lhs;
  Rational rhs;
};

struct ExtractionReport {
  ProductMeasure measure;
  bool judgment_holds = false;
  std::vector<ExtractionRow> rows;
  /// lhs <= rhs on every row. Guaranteed when the judgment holds.
  bool sound = true;
};

/// E(phi(c)) against E(diamond(e . c, psi)) for every universe code. A
/// failing judgment is reported as such; its rows carry no guarantee.
ExtractionReport extraction_soundness(const EntailmentJudgment& j, const ProductMeasure& m);

/// Every positive-measure cell has value 1. Requires a nondegenerate m.
bool prob_one_collapse(const TruthValue& v, const ProductMeasure& m);

struct ReindexCheck {
  Rational source_side;
  Rational destination_side;
  bool equal() const { return source_side == destination_side; }
};

/// E_m(kappa^Omega v) against E_{kappa_* m}(v). Throws UnsupportedError when
/// the pushforward measure is not representable.
ReindexCheck check_extract_reindex(const TapeMapSpec& k, const TruthValue& v, const ProductMeasure& m);

/// Law of split sequencing against the law-level bind. The first computation
/// sees destination component 0 of `split`, each continuation component 1.
bool check_law_split_seq(const TraceTree& t, const Continuation& f, const TapeMapSpec& split,
                         const ProductMeasure& m);
/// The same equation for plain same-tape bind, which fails in general.
bool check_law_plain_seq(const TraceTree& t, const Continuation& f, const ProductMeasure& m);

struct BridgeCheck {
  bool collapse = false;
  bool must_holds = false;
  bool agree() const { return collapse == must_holds; }
};

/// prob_one_collapse(diamond(c, crisp P)) against must(law(c), P).
BridgeCheck bridge_prob_one(const PatchedComputation& c, const std::set<Code>& accept, std::size_t arity,
                            const ProductMeasure& m);

}  // namespace tapekit
