#pragma once

// Fuel-bounded evaluation of codes against tapes, and symbolic tracing into
// trace trees.

#include <cstddef>

#include "tapekit/code.hpp"
#include "tapekit/tape_space.hpp"
#include "tapekit/trace_tree.hpp"

namespace tapekit {

/// Steps added by translate_evidence: eval(tr(e) c, t, F + 3) = eval(e c, k(t), F).
inline constexpr std::size_t kTranslationFuelOverhead = 3;

struct Run {
  Outcome outcome;
  /// Reduction steps consumed.
  std::size_t steps = 0;
};

/// Leftmost-outermost weak reduction of `c` to weak normal form using at most
/// `fuel` contractions. Running out of fuel yields Bottom(fuel-exhausted); an
/// ill-formed application (including a read outside the tape's arity) yields
/// Bottom(stuck).
Outcome eval(const Code& c, const Tape& t, std::size_t fuel);
Run run(const Code& c, const Tape& t, std::size_t fuel);

/// The decision tree of eval(c, -, fuel) over all tapes of `space`: following
/// any tape's bits reaches the outcome eval would return, and each leaf's path
/// is exactly the set of addresses read on that run.
TraceTree trace(const Code& c, const TapeSpace& space, std::size_t fuel);

/// trace(App(c1, c2), space, fuel)
TraceTree mca_apply(const Code& c1, const Code& c2, const TapeSpace& space, std::size_t fuel);

/// tr_k(e) := [x] Remap(k, App(e, x)), which abstracts to S (K remap_k) e.
Code translate_evidence(const TapeMapSpec& k, const Code& e);

}  // namespace tapekit
