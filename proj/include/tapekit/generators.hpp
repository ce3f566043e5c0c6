#pragma once

// Seeded random instances shared by the property checkers and the tests.
// Every generator is a pure function of the engine state, so a fixed seed
// reproduces a run exactly.

#include <cstdint>
#include <random>
#include <vector>

#include "tapekit/code.hpp"
#include "tapekit/trace_tree.hpp"
#include "tapekit/truth.hpp"

namespace tapekit::gen {

using Engine = std::mt19937_64;

struct Settings {
  std::uint64_t seed = 1;
  std::size_t instances = 200;
  std::size_t arity = 1;
  /// Maximum number of bits read along any path of a generated tree.
  std::size_t max_depth = 3;
  /// Highest index a generated address may use.
  std::size_t max_index = 5;
};

std::size_t below(Engine& g, std::size_t n);
bool coin(Engine& g);

/// A random dyadic-or-thirds rational in [0,1].
Rational unit_rational(Engine& g);
Address address(Engine& g, std::size_t arity, std::size_t max_index);
/// Small closed constants and numerals used as outcome values.
std::vector<Code> outcome_pool();

/// A tree reading at most `max_depth` distinct addresses per path, with
/// leaves drawn from `pool` or bottom (about one leaf in six).
TraceTree tree(Engine& g, const Settings& s, const std::vector<Code>& pool);

/// A truth value with a random partition of depth <= 3 and, when
/// `with_exceptions`, up to two exceptional tapes.
TruthValue truth_value(Engine& g, const Settings& s, bool with_exceptions);

/// An eventually-periodic tape with a short prefix.
Tape tape(Engine& g, std::size_t arity, std::size_t max_prefix = 6);

/// A closed code over S/K/I, pairs, bits, numerals, constants and reads,
/// built from at most `budget` nodes.
Code code(Engine& g, std::size_t budget, std::size_t arity);

/// A code whose evaluation reads at most `max_reads` bits of component
/// `component`, returning a constant or bit picked by the bits read.
Code reader(Engine& g, std::size_t max_reads, std::size_t component, std::size_t max_index);

}  // namespace tapekit::gen
