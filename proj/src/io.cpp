#include "tapekit/io.hpp"

namespace tapekit::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t natural(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw SchemaError(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Code code_from_json(const Json& j) { return parse_code(text(j, "code")); }

}  // namespace

Json to_json(const Rational& q) { return tapekit::to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  return parse_rational(text(j, "rational"));
}

Address address_from_text(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw SchemaError("address '" + s + "' is not of the form component,index");
  try {
    std::size_t used = 0;
    const std::string c = s.substr(0, comma);
    const std::string i = s.substr(comma + 1);
    Address a{std::stoul(c, &used), 0};
    if (used != c.size()) throw SchemaError("bad address '" + s + "'");
    a.index = std::stoul(i, &used);
    if (used != i.size()) throw SchemaError("bad address '" + s + "'");
    return a;
  } catch (const std::logic_error&) {
    throw SchemaError("bad address '" + s + "'");
  }
}

Json to_json(const BitPattern& p) {
  Json out = Json::array();
  for (const auto& [a, b] : p.constraints()) out.push_back(Json::array({to_string(a), b ? 1 : 0}));
  return out;
}

BitPattern pattern_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("pattern must be an array of [address, bit] pairs");
  BitPattern p;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw SchemaError("pattern entry must be [address, bit]");
    const std::size_t bit = natural(e[1], "pattern bit");
    if (bit > 1) throw SchemaError("pattern bit must be 0 or 1");
    if (!p.constrain(address_from_text(text(e[0], "address")), bit == 1)) {
      throw SchemaError("pattern constrains an address both ways");
    }
  }
  return p;
}

Json to_json(const ProductMeasure& m) {
  Json out{{"default_bias", to_json(m.default_bias())}};
  if (!m.component_defaults().empty()) {
    Json cd = Json::array();
    for (const auto& [c, b] : m.component_defaults()) cd.push_back({{"component", c}, {"bias", to_json(b)}});
    out["component_defaults"] = cd;
  }
  Json ov = Json::array();
  for (const auto& [a, b] : m.overrides()) {
    ov.push_back({{"component", a.component}, {"index", a.index}, {"bias", to_json(b)}});
  }
  out["overrides"] = ov;
  return out;
}

ProductMeasure measure_from_json(const Json& j) {
  ProductMeasure m(j.contains("default_bias") ? rational_from_json(j.at("default_bias")) : rational(1, 2));
  auto check = [](const Rational& b) {
    if (!in_unit_interval(b)) throw SchemaError("bias " + tapekit::to_string(b) + " outside [0,1]");
    return b;
  };
  check(m.default_bias());
  if (j.contains("component_defaults")) {
    for (const auto& e : j.at("component_defaults")) {
      m.set_component_default(natural(field(e, "component"), "component"), check(rational_from_json(field(e, "bias"))));
    }
  }
  if (j.contains("overrides")) {
    for (const auto& e : j.at("overrides")) {
      m.set_override(Address{natural(field(e, "component"), "component"), natural(field(e, "index"), "index")},
                     check(rational_from_json(field(e, "bias"))));
    }
  }
  return m;
}

Json to_json(const TruthValue& v) {
  Json cells = Json::array();
  for (const auto& c : v.cells()) cells.push_back({{"pattern", to_json(c.pattern)}, {"value", to_json(c.value)}});
  Json ex = Json::array();
  for (const auto& [t, val] : v.exceptions()) ex.push_back({{"tape", t.to_string()}, {"value", to_json(val)}});
  Json out{{"arity", v.arity()}, {"cells", cells}, {"exceptions", ex}};
  if (!v.notes().empty()) out["notes"] = v.notes();
  return out;
}

TruthValue truth_value_from_json(const Json& j) {
  const std::size_t arity = j.contains("arity") ? natural(j.at("arity"), "arity") : 1;
  std::vector<Cell> cells;
  for (const auto& c : field(j, "cells")) {
    cells.push_back(Cell{pattern_from_json(field(c, "pattern")), rational_from_json(field(c, "value"))});
  }
  std::map<Tape, Rational> ex;
  if (j.contains("exceptions")) {
    for (const auto& e : j.at("exceptions")) {
      ex[Tape::parse(text(field(e, "tape"), "tape"))] = rational_from_json(field(e, "value"));
    }
  }
  std::vector<std::string> notes;
  if (j.contains("notes")) notes = j.at("notes").get<std::vector<std::string>>();
  return TruthValue(arity, std::move(cells), std::move(ex), std::move(notes));
}

Json to_json(const Outcome& o) {
  if (o.is_bottom()) return {{"bottom", to_string(o.reason())}};
  return {{"value", o.code().label()}};
}

Outcome outcome_from_json(const Json& j) {
  if (j.is_object() && j.contains("value")) return Outcome::value(code_from_json(j.at("value")));
  if (j.is_object() && j.contains("bottom")) {
    const std::string reason = text(j.at("bottom"), "bottom");
    if (reason == "fuel-exhausted") return Outcome::bottom(BottomReason::FuelExhausted);
    if (reason == "stuck") return Outcome::bottom(BottomReason::Stuck);
    throw SchemaError("bottom reason must be fuel-exhausted or stuck, got '" + reason + "'");
  }
  throw SchemaError("outcome must have the key value or bottom");
}

Json to_json(const TraceTree& t) {
  if (t.is_leaf()) return to_json(t.outcome());
  return {{"read", to_string(t.address())}, {"zero", to_json(t.zero())}, {"one", to_json(t.one())}};
}

TraceTree tree_from_json(const Json& j) {
  if (j.is_object() && j.contains("read")) {
    return TraceTree::branch(address_from_text(text(j.at("read"), "read")), tree_from_json(field(j, "zero")),
                             tree_from_json(field(j, "one")));
  }
  return TraceTree::leaf(outcome_from_json(j));
}

Json to_json(const FinDist& d) {
  Json out = Json::object();
  for (const auto& [x, p] : d.masses()) {
    if (x) out[*x] = to_json(p);
  }
  if (auto b = d.mass(std::nullopt); b > 0) out["bottom"] = to_json(b);
  return out;
}

FinDist dist_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("distribution must be an object of label: mass");
  std::map<Label, Rational> masses;
  for (const auto& [k, v] : j.items()) {
    masses[k == "bottom" ? Label{} : Label{k}] = rational_from_json(v);
  }
  return FinDist(std::move(masses));
}

Json to_json(const Proposition& p) {
  switch (p.kind()) {
    case Proposition::Kind::CrispLift: {
      Json a = Json::array();
      for (const auto& c : p.accept()) a.push_back(c.to_sexpr());
      return {{"crisp", a}};
    }
    case Proposition::Kind::TestTable: {
      Json a = Json::array();
      for (const auto& [c, v] : p.entries()) a.push_back({{"code", c.to_sexpr()}, {"value", to_json(v)}});
      return {{"table", a}};
    }
    case Proposition::Kind::Constant: return {{"constant", to_json(p.constant_value())}};
  }
  return nullptr;
}

Proposition proposition_from_json(const Json& j) {
  if (j.is_object() && j.contains("crisp")) {
    std::set<Code> accept;
    for (const auto& c : j.at("crisp")) accept.insert(code_from_json(c));
    return Proposition::crisp(std::move(accept));
  }
  if (j.is_object() && j.contains("table")) {
    std::map<Code, TruthValue> entries;
    for (const auto& e : j.at("table")) {
      entries.emplace(code_from_json(field(e, "code")), truth_value_from_json(field(e, "value")));
    }
    return Proposition::table(std::move(entries));
  }
  if (j.is_object() && j.contains("constant")) return Proposition::constant(truth_value_from_json(j.at("constant")));
  throw SchemaError("proposition must have one of the keys crisp, table, constant");
}

JudgmentSpec judgment_spec_from_json(const Json& j, std::size_t default_fuel) {
  JudgmentSpec s{proposition_from_json(field(j, "phi")), code_from_json(field(j, "evidence")),
                 proposition_from_json(field(j, "psi")), {}, 1, default_fuel, Mode::Pointwise, std::nullopt};
  for (const auto& c : field(j, "universe")) s.universe.push_back(code_from_json(c));
  if (j.contains("arity")) s.arity = natural(j.at("arity"), "arity");
  if (j.contains("fuel")) s.fuel = natural(j.at("fuel"), "fuel");
  if (j.contains("mode")) s.mode = parse_mode(text(j.at("mode"), "mode"));
  if (j.contains("measure")) s.measure = measure_from_json(j.at("measure"));
  return s;
}

EntailmentJudgment check(const JudgmentSpec& s) {
  return check_entailment(s.phi, s.evidence, s.psi, s.universe, s.arity, s.fuel, s.mode, s.measure);
}

Json to_json(const EntailmentJudgment& j) {
  Json universe = Json::array();
  for (const auto& c : j.universe) universe.push_back(c.to_sexpr());
  Json out{{"phi", to_json(j.phi)},       {"evidence", j.evidence.to_sexpr()}, {"psi", to_json(j.psi)},
           {"universe", universe},        {"arity", j.arity},                  {"fuel", j.fuel},
           {"mode", to_string(j.mode)}};
  if (j.measure) out["measure"] = to_json(*j.measure);
  out["verdict"] = j.holds ? "holds" : "fails";
  if (j.counterexample) {
    const auto& cx = *j.counterexample;
    Json c{{"code", cx.code.to_sexpr()}};
    if (cx.violation.tape) {
      c["tape"] = cx.violation.tape->to_string();
    } else {
      c["pattern"] = to_json(cx.violation.pattern);
    }
    c["lhs"] = to_json(cx.violation.lhs);
    c["rhs"] = to_json(cx.violation.rhs);
    out["counterexample"] = c;
  }
  return out;
}

Json to_json(const ExtractionReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"code", row.code.to_sexpr()}, {"lhs", to_json(row.lhs)}, {"rhs", to_json(row.rhs)}});
  }
  return {{"measure", to_json(r.measure)},
          {"judgment", r.judgment_holds ? "holds" : "fails"},
          {"rows", rows},
          {"sound", r.sound}};
}

Json to_json(const MustJudgment& j) {
  Json out{{"verdict", j.holds ? "holds" : "fails"}};
  if (!j.holds) {
    out["code"] = j.failing_code->to_sexpr();
    out["offending"] = label_text(j.offending);
    Json support = Json::array();
    for (const auto& l : j.failing_law->support()) support.push_back(label_text(l));
    out["support"] = support;
  }
  return out;
}

Json to_json(const VnFairnessReport& r) {
  Json out{{"pairs", r.pairs},
           {"law", to_json(r.law)},
           {"expect_H", to_json(r.expect_h)},
           {"expect_T", to_json(r.expect_t)},
           {"flip_symmetry", r.flip_symmetry},
           {"swap_conjugation", r.swap_conjugation}};
  if (r.closed_form) out["closed_form"] = *r.closed_form;
  out["ok"] = r.ok();
  return out;
}

Json to_json(const MajorityReport& r) {
  return {{"bias", to_json(r.bias)},
          {"base", to_json(r.base)},
          {"amplified", to_json(r.amplified)},
          {"transported", to_json(r.transported)},
          {"closed_form", to_json(r.closed_form)},
          {"judgment", r.judgment_holds ? "holds" : "fails"},
          {"transported_judgment", r.transported_holds ? "holds" : "fails"},
          {"ok", r.ok()}};
}

}  // namespace tapekit::io
