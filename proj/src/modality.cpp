#include "tapekit/modality.hpp"

#include <algorithm>

namespace tapekit {

Proposition Proposition::crisp(std::set<Code> accept) { return Proposition(Data(std::move(accept))); }

Proposition Proposition::table(std::map<Code, TruthValue> entries) {
  for (const auto& kv : entries) {
    if (!kv.first.free_vars().empty()) throw SyntaxError("test table key " + kv.first.to_sexpr() + " is not closed");
  }
  return Proposition(Data(std::move(entries)));
}

Proposition Proposition::constant(TruthValue v) { return Proposition(Data(std::move(v))); }

Proposition::Kind Proposition::kind() const { return static_cast<Kind>(data_.index()); }

const std::set<Code>& Proposition::accept() const { return std::get<0>(data_); }

const std::map<Code, TruthValue>& Proposition::entries() const { return std::get<1>(data_); }

const TruthValue& Proposition::constant_value() const { return std::get<2>(data_); }

namespace {

const TruthValue& in_space(const TruthValue& v, std::size_t arity) {
  if (v.arity() != arity) {
    throw TapeError("proposition value has arity " + std::to_string(v.arity()) + ", expected " +
                    std::to_string(arity));
  }
  return v;
}

}  // namespace

TruthValue Proposition::at(const Code& x, std::size_t arity) const {
  switch (kind()) {
    case Kind::CrispLift: return TruthValue::constant(arity, accept().count(x) ? 1 : 0);
    case Kind::TestTable: {
      auto it = entries().find(x);
      if (it == entries().end()) throw UndefinedPropositionError("proposition undefined at " + x.to_sexpr());
      return in_space(it->second, arity);
    }
    case Kind::Constant: return in_space(constant_value(), arity);
  }
  throw ImplementationFault("unknown proposition kind");
}

Proposition Proposition::pullback(const TapeMapSpec& k) const {
  switch (kind()) {
    case Kind::CrispLift: return *this;
    case Kind::TestTable: {
      std::map<Code, TruthValue> out;
      for (const auto& [c, v] : entries()) out.emplace(c, tv_pullback(k, v));
      return table(std::move(out));
    }
    case Kind::Constant: return constant(tv_pullback(k, constant_value()));
  }
  throw ImplementationFault("unknown proposition kind");
}

std::string Proposition::to_string() const {
  std::string out;
  switch (kind()) {
    case Kind::CrispLift:
      out = "crisp{";
      for (const auto& c : accept()) out += (out.size() > 6 ? " " : "") + c.to_sexpr();
      return out + "}";
    case Kind::TestTable:
      out = "table{";
      for (const auto& [c, v] : entries()) out += c.to_sexpr() + ": [" + v.to_string() + "] ";
      return out + "}";
    case Kind::Constant: return "constant[" + constant_value().to_string() + "]";
  }
  return out;
}

TruthValue diamond(const TraceTree& t, const Proposition& psi, std::size_t arity) {
  std::vector<Cell> cells;
  std::map<Tape, Rational> ex;
  std::vector<std::string> notes;
  for (const auto& leaf : t.leaves()) {
    if (leaf.outcome.is_bottom()) {
      cells.push_back(Cell{leaf.path, 0});
      continue;
    }
    TruthValue v = psi.at(leaf.outcome.code(), arity);
    for (const auto& c : v.cells()) {
      if (auto p = c.pattern.intersect(leaf.path)) cells.push_back(Cell{*p, c.value});
    }
    for (const auto& [tape, val] : v.exceptions()) {
      if (leaf.path.matches(tape)) ex.emplace(tape, val);
    }
    for (const auto& n : v.notes()) {
      if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
    }
  }
  return TruthValue(arity, std::move(cells), std::move(ex), std::move(notes));
}

std::string to_string(Mode m) { return m == Mode::Pointwise ? "pointwise" : "as"; }

Mode parse_mode(std::string_view s) {
  if (s == "pointwise") return Mode::Pointwise;
  if (s == "as" || s == "almost-sure") return Mode::AlmostSure;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected pointwise or as)");
}

EntailmentJudgment check_entailment(const Proposition& phi, const Code& e, const Proposition& psi,
                                    const std::vector<Code>& universe, std::size_t arity, std::size_t fuel,
                                    Mode mode, const std::optional<ProductMeasure>& measure) {
  if (universe.empty()) throw std::invalid_argument("entailment needs a nonempty code universe");
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");
  if (mode == Mode::AlmostSure) {
    if (!measure) throw DegenerateMeasureError("almost-sure entailment needs a measure");
    require_nondegenerate(*measure, "almost-sure entailment");
  }
  EntailmentJudgment j{phi, e, psi, mode, universe, arity, fuel, measure, true, std::nullopt};
  const TapeSpace space(arity);
  for (const auto& c : universe) {
    TruthValue rhs = diamond(mca_apply(e, c, space, fuel), psi, arity);
    TruthValue lhs = phi.at(c, arity);
    auto v = mode == Mode::Pointwise ? tv_leq_violation(lhs, rhs) : tv_leq_as_violation(lhs, rhs, *measure);
    if (v) {
      j.holds = false;
      j.counterexample = Counterexample{c, *v};
      break;
    }
  }
  return j;
}

EntailmentJudgment recheck(const EntailmentJudgment& j) {
  return check_entailment(j.phi, j.evidence, j.psi, j.universe, j.arity, j.fuel, j.mode, j.measure);
}

EntailmentJudgment transport_entailment(const EntailmentJudgment& j, const TapeMapSpec& k) {
  if (!j.holds) throw std::invalid_argument("only a holding judgment can be transported");
  if (j.arity != k.dst_arity()) {
    throw TapeError("judgment over arity " + std::to_string(j.arity) + " cannot be transported along " + k.name() +
                    " (destination arity " + std::to_string(k.dst_arity()) + ")");
  }
  EntailmentJudgment out = check_entailment(j.phi.pullback(k), translate_evidence(k, j.evidence), j.psi.pullback(k),
                                            j.universe, k.src_arity(), j.fuel + kTranslationFuelOverhead, j.mode,
                                            j.measure);
  if (!out.holds) {
    const auto& cx = *out.counterexample;
    throw ImplementationFault("transported judgment along " + k.name() + " fails at code " + cx.code.to_sexpr() +
                              ", " + cx.violation.where() + ": " + to_string(cx.violation.lhs) + " > " +
                              to_string(cx.violation.rhs));
  }
  return out;
}

namespace {

void tally(AxiomTally& t, bool ok, const std::string& what) {
  ++t.checked;
  if (!ok) {
    if (t.failed == 0) t.first_failure = what;
    ++t.failed;
  }
}

Proposition random_table(gen::Engine& g, const gen::Settings& s, const std::vector<Code>& pool) {
  std::map<Code, TruthValue> entries;
  for (const auto& x : pool) entries.emplace(x, gen::truth_value(g, s, gen::below(g, 4) == 0));
  return Proposition::table(std::move(entries));
}

}  // namespace

ModalityAxiomReport check_modality_axioms(const gen::Settings& settings) {
  ModalityAxiomReport report;
  gen::Engine g(settings.seed);
  const auto pool = gen::outcome_pool();
  const std::size_t n = settings.arity;
  for (std::size_t i = 0; i < settings.instances; ++i) {
    const std::string tag = "instance " + std::to_string(i);
    Proposition psi = random_table(g, settings, pool);
    TraceTree t = gen::tree(g, settings, pool);

    const Code& x = pool[gen::below(g, pool.size())];
    tally(report.after_return, diamond(monad_return(x), psi, n) == psi.at(x, n), tag);

    std::map<Code, TraceTree> f;
    for (const auto& y : pool) f.emplace(y, gen::tree(g, settings, pool));
    auto cont = [&f](const Code& y) { return f.at(y); };
    std::map<Code, TruthValue> inner;
    for (const auto& y : pool) inner.emplace(y, diamond(f.at(y), psi, n));
    tally(report.after_bind,
          diamond(monad_bind(t, cont), psi, n) == diamond(t, Proposition::table(std::move(inner)), n), tag);

    std::map<Code, TruthValue> stronger;
    for (const auto& y : pool) {
      stronger.emplace(y, tv_join(psi.at(y, n), gen::truth_value(g, settings, gen::below(g, 4) == 0)));
    }
    Proposition psi2 = Proposition::table(std::move(stronger));
    tally(report.monotonicity, tv_leq(diamond(t, psi, n), diamond(t, psi2, n)), tag);
    tally(report.monotonicity,
          tv_leq(diamond(t, Proposition::crisp({pool[0]}), n), diamond(t, Proposition::crisp({pool[0], pool[1]}), n)),
          tag + " (crisp)");

    Proposition chi = random_table(g, settings, pool);
    TruthValue bound = TruthValue::constant(n, 1);
    for (const auto& y : pool) bound = tv_meet(bound, tv_impl(psi.at(y, n), chi.at(y, n)));
    tally(report.internal_monotonicity, tv_leq(bound, tv_impl(diamond(t, psi, n), diamond(t, chi, n))), tag);
  }
  return report;
}

}  // namespace tapekit
