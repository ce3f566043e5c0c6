#pragma once

// Truth values: tape-indexed success levels in [0,1], represented by a finite
// partition of bit-pattern cells plus finitely many exceptional tapes.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tapekit/rational.hpp"
#include "tapekit/tape_space.hpp"

namespace tapekit {

/// Raised when an almost-sure comparison is asked for under a measure that
/// gives some bit probability 0 or 1.
class DegenerateMeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Cell {
  BitPattern pattern;
  Rational value;
};

/// A function from tapes of a fixed arity to [0,1]. Cells are pairwise
/// disjoint and cover the space; an exception overrides the cell value at one
/// eventually-periodic tape. Exceptions are null under every nondegenerate
/// product measure.
class TruthValue {
 public:
  /// Validates and normalizes: adjacent cells that differ only in one bit and
  /// carry the same value are merged, and exceptions equal to their covering
  /// cell are dropped. Throws TapeError on overlap, gaps, values outside
  /// [0,1] or addresses outside the arity.
  TruthValue(std::size_t arity, std::vector<Cell> cells, std::map<Tape, Rational> exceptions = {},
             std::vector<std::string> notes = {});

  static TruthValue constant(std::size_t arity, const Rational& v);
  /// `inside` on tapes matching `p`, `outside` elsewhere.
  static TruthValue indicator(std::size_t arity, const BitPattern& p, const Rational& inside,
                              const Rational& outside = 0);

  std::size_t arity() const { return arity_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::map<Tape, Rational>& exceptions() const { return exceptions_; }
  /// Provenance remarks, e.g. exceptions that could not be pulled back.
  const std::vector<std::string>& notes() const { return notes_; }

  /// The same value with every exception removed.
  TruthValue without_exceptions() const;
  /// A copy with one more exception (replacing any existing one at `t`).
  TruthValue with_exception(const Tape& t, const Rational& v) const;

  /// Single-line rendering, cells in order then exceptions.
  std::string to_string() const;

 private:
  std::size_t arity_;
  std::vector<Cell> cells_;
  std::map<Tape, Rational> exceptions_;
  std::vector<std::string> notes_;
};

Rational tv_eval(const TruthValue& v, const Tape& t);

TruthValue tv_meet(const TruthValue& a, const TruthValue& b);
TruthValue tv_join(const TruthValue& a, const TruthValue& b);
/// Goedel implication: 1 where a <= b, else b.
TruthValue tv_impl(const TruthValue& a, const TruthValue& b);
/// Pointwise combination over the common refinement of the two partitions
/// and at every exception tape of either side.
TruthValue tv_combine(const TruthValue& a, const TruthValue& b,
                      const std::function<Rational(const Rational&, const Rational&)>& op);

/// Pointwise equality of the two functions (not of representations).
bool operator==(const TruthValue& a, const TruthValue& b);

/// Where a comparison a <= b fails: a cell of the common refinement, or an
/// exceptional tape.
struct Violation {
  BitPattern pattern;
  std::optional<Tape> tape;
  Rational lhs;
  Rational rhs;
  std::string where() const;
};

/// First failure of a(r) <= b(r) over all tapes, or nullopt.
std::optional<Violation> tv_leq_violation(const TruthValue& a, const TruthValue& b);
/// First failure of a <= b on a positive-measure cell, or nullopt. Throws
/// DegenerateMeasureError unless m is nondegenerate.
std::optional<Violation> tv_leq_as_violation(const TruthValue& a, const TruthValue& b,
                                             const ProductMeasure& m);

bool tv_leq(const TruthValue& a, const TruthValue& b);
bool tv_leq_as(const TruthValue& a, const TruthValue& b, const ProductMeasure& m);
bool as_equiv(const TruthValue& a, const TruthValue& b, const ProductMeasure& m);

/// Pointwise max / min of a finite nonempty family, exceptions dropped.
TruthValue ess_sup(const std::vector<TruthValue>& family);
TruthValue ess_inf(const std::vector<TruthValue>& family);

/// kappa^Omega(v) = v . kappa, a truth value over the source space of k.
TruthValue tv_pullback(const TapeMapSpec& k, const TruthValue& v);

/// Throws DegenerateMeasureError unless m is nondegenerate.
void require_nondegenerate(const ProductMeasure& m, const char* what);

}  // namespace tapekit
