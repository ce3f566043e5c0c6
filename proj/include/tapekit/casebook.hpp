#pragma once

// Worked fixtures: von Neumann unbiasing of a biased bit stream, and
// majority-of-k amplification of a verifier run on k independent tapes.

#include <optional>
#include <set>

#include "tapekit/extraction.hpp"
#include "tapekit/modality.hpp"

namespace tapekit {

/// vn scans pairs (r(2j), r(2j+1)) and answers H on the first 01, T on the
/// first 10. At fuel kVnFuelBase + kVnFuelPerPair * k its trace decides
/// exactly the first k pairs and is bottom beyond them.
inline constexpr std::size_t kVnFuelBase = 8;
inline constexpr std::size_t kVnFuelPerPair = 37;

struct VnFixture {
  std::size_t pairs = 0;
  Code code;
  std::size_t fuel = 0;

  /// K vn: evidence that ignores its argument and runs vn.
  Code wrapper() const;
  TraceTree trace() const;
  /// diamond(trace, crisp{H}) and diamond(trace, crisp{T}).
  TruthValue alpha_h() const;
  TruthValue alpha_t() const;
};

/// The vn source text, parsed by build_vn.
const char* vn_source();
/// Throws std::invalid_argument for k = 0.
VnFixture build_vn(std::size_t k);

struct VnFairnessReport {
  std::size_t pairs = 0;
  FinDist law;
  Rational expect_h;
  Rational expect_t;
  /// flip^Omega(alpha_H) = alpha_T
  bool flip_symmetry = false;
  /// eval(vn, flip t) = swap(eval(vn, t)) on every zero-tail tape with a
  /// 2k-bit prefix.
  bool swap_conjugation = false;
  /// E(alpha_H) = E(alpha_T) = (1 - (1-q)^k)/2 with q = 2p(1-p), checked when
  /// the measure is an i.i.d. bias p; nullopt otherwise.
  std::optional<bool> closed_form;
  bool ok() const { return flip_symmetry && swap_conjugation && expect_h == expect_t && closed_form.value_or(true); }
};

VnFairnessReport vn_fairness_report(std::size_t k, const ProductMeasure& m);

struct MajorityFixture {
  std::size_t repetitions = 0;
  std::size_t threshold = 0;
  /// Single-tape base verifier, applied to `input`.
  Code base;
  Code input;
  std::set<Code> accept;
  /// e_{k,t}: runs base on each component and accepts with #1 when at least
  /// t runs land in `accept`, else answers #0.
  Code verifier;
  std::size_t fuel = 0;

  /// The base verifier's acceptance event on the single tape.
  TruthValue base_acceptance() const;
  /// phi_{>=t}: at least t components accept, over the arity-k space.
  TruthValue threshold_predicate() const;
  /// phi_{>=t}(input) |- <> a <- verifier . input. crisp{#1}, pointwise.
  EntailmentJudgment judgment() const;
};

/// The base verifier `(lam c (read 0 0))`: accepts iff the first bit is 1.
Code default_base_verifier();

/// Throws std::invalid_argument unless 1 <= t <= k.
MajorityFixture build_majority(std::size_t k, std::size_t t, const Code& base, const std::set<Code>& accept,
                               std::size_t fuel = 1024);

struct MajorityReport {
  Rational bias;
  /// Acceptance probability of one base run.
  Rational base;
  /// Acceptance of the k-tape verifier under the i.i.d. product measure.
  Rational amplified;
  /// The same after transport along split_k to a single tape.
  Rational transported;
  /// sum_{j >= t} C(k,j) base^j (1-base)^(k-j)
  Rational closed_form;
  bool judgment_holds = false;
  bool transported_holds = false;
  bool ok() const {
    return judgment_holds && transported_holds && amplified == closed_form && transported == closed_form;
  }
};

MajorityReport majority_report(const MajorityFixture& f, const Rational& p);

}  // namespace tapekit
