#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tapekit/code.hpp"
#include "tapekit/tape_space.hpp"

namespace tapekit {

/// Raised when an internal invariant is violated. Never a user error.
class ImplementationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Finite decision tree over tape addresses: the exact cylinder decomposition
/// of a computation R -> X_bot at a fixed fuel. Addresses along any
/// root-to-leaf path are pairwise distinct; this is checked when a branch is
/// built.
class TraceTree {
 public:
  struct Leaf {
    BitPattern path;
    Outcome outcome;
  };

  static TraceTree leaf(Outcome o);
  static TraceTree branch(const Address& a, TraceTree zero, TraceTree one);

  bool is_leaf() const;
  const Outcome& outcome() const;
  const Address& address() const;
  const TraceTree& zero() const;
  const TraceTree& one() const;
  const TraceTree& child(bool bit) const { return bit ? one() : zero(); }

  /// Leaves in left-to-right order with their path patterns.
  std::vector<Leaf> leaves() const;
  /// Every address read somewhere in the tree, sorted.
  const std::vector<Address>& addresses() const;
  std::size_t leaf_count() const;
  std::size_t depth() const;

  /// The leaf reached by following the tape's bits.
  const Outcome& follow(const Tape& t) const;

  std::string to_string() const;

  friend bool operator==(const TraceTree& a, const TraceTree& b);

 private:
  struct Node;
  explicit TraceTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using Continuation = std::function<TraceTree(const Code&)>;

TraceTree monad_return(const Code& x);

/// Kleisli bind threading the same tape: grafts f(x) at each value leaf,
/// collapsing reads of addresses already fixed on the path.
TraceTree monad_bind(const TraceTree& t, const Continuation& f);

/// The tree restricted to tapes matching `p`: branches on constrained
/// addresses keep only the constrained child.
TraceTree restrict_tree(const TraceTree& t, const BitPattern& p);

/// kappa^M: turns a tree over the destination space of `k` into the tree of
/// the reindexed computation r |-> m(k(r)) over the source space.
TraceTree reindex_tree(const TraceTree& t, const TapeMapSpec& k);

/// Split sequencing: `t` runs on destination component 0 of the split map and
/// each f(x) on component 1, both routed back to the single source tape.
TraceTree bind_split(const TraceTree& t, const Continuation& f, const TapeMapSpec& split);

}  // namespace tapekit
