#pragma once

// Finitely supported distributions over outcome labels, the must modality
// and the bridge from tape computations to their laws.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "tapekit/generators.hpp"
#include "tapekit/modality.hpp"
#include "tapekit/rational.hpp"

namespace tapekit {

/// An outcome label: the printed value, or nullopt for bottom.
using Label = std::optional<std::string>;

std::string label_text(const Label& l);

/// A finitely supported probability distribution over labels. Masses are
/// positive and sum to exactly 1; zero masses are dropped on construction.
class FinDist {
 public:
  /// Throws std::invalid_argument on negative masses or a total other than 1.
  explicit FinDist(std::map<Label, Rational> masses);
  static FinDist dirac(const Label& x);

  const std::map<Label, Rational>& masses() const { return masses_; }
  Rational mass(const Label& x) const;
  std::set<Label> support() const;
  std::string to_string() const;

  bool operator==(const FinDist& o) const { return masses_ == o.masses_; }

 private:
  std::map<Label, Rational> masses_;
};

/// Kleisli extension with bottom propagating: f is only called on proper
/// labels, and bottom mass stays on bottom.
FinDist dist_bind(const FinDist& d, const std::function<FinDist(const std::string&)>& f);

/// Every support element is a proper label in `accept`.
bool must(const FinDist& d, const std::set<std::string>& accept);

struct MustJudgment {
  bool holds = true;
  /// First failing universe code and a support label outside the accept set.
  std::optional<Code> failing_code;
  Label offending;
  std::optional<FinDist> failing_law;
};

/// For each code c of the universe with phi(c), must(law(e . c), accept).
MustJudgment must_entail(const std::set<Code>& phi, const Code& e, const std::set<std::string>& accept,
                         const std::vector<Code>& universe, std::size_t arity, std::size_t fuel,
                         const ProductMeasure& m);

struct MustAxiomReport {
  AxiomTally after_return;
  AxiomTally after_bind;
  AxiomTally monotonicity;
  bool ok() const { return after_return.ok() && after_bind.ok() && monotonicity.ok(); }
};

/// Generates random distributions over a small label pool and checks the
/// must modality's unit, bind and monotonicity identities.
MustAxiomReport check_must_modality_axioms(const gen::Settings& settings);

/// A random distribution over `labels` plus bottom with small denominators.
FinDist random_dist(gen::Engine& g, const std::vector<Label>& labels);

}  // namespace tapekit
