#pragma once

// The tape modality, propositions over codes, entailment checking and the
// transport of entailments along tape maps.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tapekit/eval.hpp"
#include "tapekit/generators.hpp"
#include "tapekit/trace_tree.hpp"
#include "tapekit/truth.hpp"

namespace tapekit {

/// Raised when a TestTable proposition is asked about a code it does not list.
class UndefinedPropositionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A predicate C -> Omega_R.
class Proposition {
 public:
  enum class Kind { CrispLift, TestTable, Constant };

  /// psi_P(a) = 1 if a is in P, else 0.
  static Proposition crisp(std::set<Code> accept);
  static Proposition table(std::map<Code, TruthValue> entries);
  /// The same truth value at every code.
  static Proposition constant(TruthValue v);

  Kind kind() const;
  const std::set<Code>& accept() const;
  const std::map<Code, TruthValue>& entries() const;
  const TruthValue& constant_value() const;

  /// The truth value at `x` over the arity-`arity` space. Throws
  /// UndefinedPropositionError for a TestTable miss and TapeError when the
  /// stored values live in another space.
  TruthValue at(const Code& x, std::size_t arity) const;
  /// kappa^Omega applied to every stored value; CrispLift is unchanged.
  Proposition pullback(const TapeMapSpec& k) const;

  std::string to_string() const;

 private:
  using Data = std::variant<std::set<Code>, std::map<Code, TruthValue>, TruthValue>;
  explicit Proposition(Data d) : data_(std::move(d)) {}
  Data data_;
};

/// <>x <- t. psi(x): 0 on bottom leaves, psi(x) restricted to the leaf path on
/// value leaves. `arity` is the space the tree reads.
TruthValue diamond(const TraceTree& t, const Proposition& psi, std::size_t arity);

enum class Mode { Pointwise, AlmostSure };

std::string to_string(Mode m);
/// Parses "pointwise" or "as".
Mode parse_mode(std::string_view s);

struct Counterexample {
  Code code;
  Violation violation;
};

struct EntailmentJudgment {
  Proposition phi;
  Code evidence;
  Proposition psi;
  Mode mode = Mode::Pointwise;
  std::vector<Code> universe;
  std::size_t arity = 1;
  std::size_t fuel = 0;
  /// Required in almost-sure mode.
  std::optional<ProductMeasure> measure;
  bool holds = false;
  /// Present exactly when the judgment fails.
  std::optional<Counterexample> counterexample;
};

/// For every c in the universe compares phi(c) against
/// diamond(mca_apply(e, c), psi) in the chosen order. Throws
/// std::invalid_argument on an empty universe or zero fuel, and
/// DegenerateMeasureError in almost-sure mode without a nondegenerate measure.
EntailmentJudgment check_entailment(const Proposition& phi, const Code& e, const Proposition& psi,
                                    const std::vector<Code>& universe, std::size_t arity, std::size_t fuel,
                                    Mode mode, const std::optional<ProductMeasure>& measure = std::nullopt);

/// Re-checks a judgment with its own inputs.
EntailmentJudgment recheck(const EntailmentJudgment& j);

/// Moves a holding judgment over the destination space of `k` to the source
/// space: phi and psi are pulled back, the evidence becomes
/// translate_evidence(k, e) and the fuel grows by kTranslationFuelOverhead.
/// The result is re-verified; a failure there throws ImplementationFault.
/// Throws std::invalid_argument if `j` does not hold and TapeError if it is
/// not over k's destination space.
EntailmentJudgment transport_entailment(const EntailmentJudgment& j, const TapeMapSpec& k);

struct AxiomTally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_failure;
  bool ok() const { return failed == 0; }
};

struct ModalityAxiomReport {
  AxiomTally after_return;
  AxiomTally after_bind;
  AxiomTally monotonicity;
  AxiomTally internal_monotonicity;
  bool ok() const {
    return after_return.ok() && after_bind.ok() && monotonicity.ok() && internal_monotonicity.ok();
  }
};

/// Checks, on generated instances, that diamond(return x, psi) = psi(x),
/// diamond(t >>= f, psi) = diamond(t, x |-> diamond(f x, psi)), that a
/// pointwise stronger postcondition gives a pointwise stronger diamond, and
/// the internal form meet_x (psi1 x => psi2 x) <= (diamond psi1 => diamond psi2).
ModalityAxiomReport check_modality_axioms(const gen::Settings& settings);

}  // namespace tapekit
