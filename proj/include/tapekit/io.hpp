#pragma once

// JSON encodings of the library's values. Rationals are written as strings
// ("3/8", "0", "1"); addresses as "component,index"; tapes in literal syntax.

#include <json.hpp>

#include "tapekit/casebook.hpp"
#include "tapekit/dist.hpp"
#include "tapekit/extraction.hpp"
#include "tapekit/modality.hpp"

namespace tapekit::io {

using Json = nlohmann::ordered_json;

/// Raised for JSON that does not follow the documented schemas.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Address address_from_text(const std::string& s);

/// [["0,3",1],["1,0",0]]
Json to_json(const BitPattern& p);
BitPattern pattern_from_json(const Json& j);

/// {"default_bias":"1/2","component_defaults":[{"component":1,"bias":"1/3"}],
///  "overrides":[{"component":0,"index":3,"bias":"1/4"}]}
Json to_json(const ProductMeasure& m);
ProductMeasure measure_from_json(const Json& j);

/// {"cells":[{"pattern":[...],"value":"1/2"}],"exceptions":[{"tape":":0","value":"0"}]}
/// plus "arity" and "notes" when relevant. Reading defaults the arity to 1.
Json to_json(const TruthValue& v);
TruthValue truth_value_from_json(const Json& j);

/// {"value":"H"} or {"bottom":"fuel-exhausted"}
Json to_json(const Outcome& o);
Outcome outcome_from_json(const Json& j);

/// Leaves as outcome objects; branches as {"read":"0,1","zero":...,"one":...}.
Json to_json(const TraceTree& t);
TraceTree tree_from_json(const Json& j);

/// {"H":"3/8","T":"3/8","bottom":"1/4"}
Json to_json(const FinDist& d);
FinDist dist_from_json(const Json& j);

/// {"crisp":["H","T"]}, {"table":[{"code":"H","value":{...}}]} or {"constant":{...}}
Json to_json(const Proposition& p);
Proposition proposition_from_json(const Json& j);

/// A judgment spec: phi, evidence, psi, universe, arity, fuel, mode and an
/// optional measure. Missing fuel falls back to `default_fuel`.
struct JudgmentSpec {
  Proposition phi;
  Code evidence;
  Proposition psi;
  std::vector<Code> universe;
  std::size_t arity = 1;
  std::size_t fuel = 0;
  Mode mode = Mode::Pointwise;
  std::optional<ProductMeasure> measure;
};

JudgmentSpec judgment_spec_from_json(const Json& j, std::size_t default_fuel);
EntailmentJudgment check(const JudgmentSpec& s);

/// The spec fields echoed back plus "verdict" and, on failure,
/// "counterexample" with code, pattern or tape, lhs and rhs. A report is
/// itself a valid judgment spec.
Json to_json(const EntailmentJudgment& j);

Json to_json(const ExtractionReport& r);
Json to_json(const MustJudgment& j);
Json to_json(const VnFairnessReport& r);
Json to_json(const MajorityReport& r);

}  // namespace tapekit::io
