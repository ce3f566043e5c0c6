#include "tapekit/trace_tree.hpp"

#include <algorithm>
#include <iterator>
#include <map>

namespace tapekit {

struct TraceTree::Node {
  std::optional<Outcome> outcome;
  Address address;
  std::optional<TraceTree> zero;
  std::optional<TraceTree> one;
  std::vector<Address> addresses;
  std::size_t leaf_count = 1;
  std::size_t depth = 0;
};

TraceTree TraceTree::leaf(Outcome o) {
  auto n = std::make_shared<Node>();
  n->outcome = std::move(o);
  return TraceTree(std::move(n));
}

TraceTree TraceTree::branch(const Address& a, TraceTree zero, TraceTree one) {
  const auto& za = zero.node_->addresses;
  const auto& oa = one.node_->addresses;
  if (std::binary_search(za.begin(), za.end(), a) || std::binary_search(oa.begin(), oa.end(), a)) {
    throw ImplementationFault("trace tree reads address (" + tapekit::to_string(a) + ") twice on one path");
  }
  auto n = std::make_shared<Node>();
  n->address = a;
  std::set_union(za.begin(), za.end(), oa.begin(), oa.end(), std::back_inserter(n->addresses));
  n->addresses.insert(std::lower_bound(n->addresses.begin(), n->addresses.end(), a), a);
  n->leaf_count = zero.node_->leaf_count + one.node_->leaf_count;
  n->depth = 1 + std::max(zero.node_->depth, one.node_->depth);
  n->zero = std::move(zero);
  n->one = std::move(one);
  return TraceTree(std::move(n));
}

bool TraceTree::is_leaf() const { return node_->outcome.has_value(); }

const Outcome& TraceTree::outcome() const {
  if (!is_leaf()) throw ImplementationFault("outcome() on a branch node");
  return *node_->outcome;
}

const Address& TraceTree::address() const {
  if (is_leaf()) throw ImplementationFault("address() on a leaf");
  return node_->address;
}

const TraceTree& TraceTree::zero() const {
  if (is_leaf()) throw ImplementationFault("zero() on a leaf");
  return *node_->zero;
}

const TraceTree& TraceTree::one() const {
  if (is_leaf()) throw ImplementationFault("one() on a leaf");
  return *node_->one;
}

std::vector<TraceTree::Leaf> TraceTree::leaves() const {
  std::vector<Leaf> out;
  BitPattern path;
  std::function<void(const TraceTree&)> walk = [&](const TraceTree& t) {
    if (t.is_leaf()) {
      out.push_back(Leaf{path, t.outcome()});
      return;
    }
    for (bool b : {false, true}) {
      BitPattern saved = path;
      path.constrain(t.address(), b);
      walk(t.child(b));
      path = std::move(saved);
    }
  };
  walk(*this);
  return out;
}

const std::vector<Address>& TraceTree::addresses() const { return node_->addresses; }
std::size_t TraceTree::leaf_count() const { return node_->leaf_count; }
std::size_t TraceTree::depth() const { return node_->depth; }

const Outcome& TraceTree::follow(const Tape& t) const {
  const TraceTree* cur = this;
  while (!cur->is_leaf()) cur = &cur->child(t.read(cur->address()));
  return cur->outcome();
}

std::string TraceTree::to_string() const {
  if (is_leaf()) return outcome().to_string();
  return "[" + tapekit::to_string(address()) + " ? " + zero().to_string() + " : " + one().to_string() + "]";
}

bool operator==(const TraceTree& a, const TraceTree& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.outcome() == b.outcome();
  return a.address() == b.address() && a.zero() == b.zero() && a.one() == b.one();
}

// ---------------------------------------------------------------------------

TraceTree monad_return(const Code& x) { return TraceTree::leaf(Outcome::value(x)); }

namespace {

// Rebuilds `t` with every branch address passed through `route`, which
// returns the new address and whether the bit is negated on the way.
template <typename Route>
TraceTree reroute(const TraceTree& t, const Route& route, std::map<Address, bool>& path) {
  if (t.is_leaf()) return t;
  auto [a, negate] = route(t.address());
  if (auto it = path.find(a); it != path.end()) return reroute(t.child(it->second != negate), route, path);
  path[a] = false;
  TraceTree z = reroute(t.child(negate), route, path);
  path[a] = true;
  TraceTree o = reroute(t.child(!negate), route, path);
  path.erase(a);
  return TraceTree::branch(a, std::move(z), std::move(o));
}

}  // namespace

TraceTree restrict_tree(const TraceTree& t, const BitPattern& p) {
  std::map<Address, bool> path(p.constraints().begin(), p.constraints().end());
  return reroute(t, [](const Address& a) { return std::make_pair(a, false); }, path);
}

TraceTree monad_bind(const TraceTree& t, const Continuation& f) {
  std::map<Address, bool> path;
  std::function<TraceTree(const TraceTree&)> go = [&](const TraceTree& node) -> TraceTree {
    if (node.is_leaf()) {
      if (node.outcome().is_bottom()) return node;
      BitPattern p;
      for (const auto& [a, b] : path) p.constrain(a, b);
      return restrict_tree(f(node.outcome().code()), p);
    }
    const Address a = node.address();
    path[a] = false;
    TraceTree z = go(node.zero());
    path[a] = true;
    TraceTree o = go(node.one());
    path.erase(a);
    return TraceTree::branch(a, std::move(z), std::move(o));
  };
  return go(t);
}

TraceTree reindex_tree(const TraceTree& t, const TapeMapSpec& k) {
  std::map<Address, bool> path;
  auto route = [&](const Address& dst) { return std::make_pair(k.source_of(dst), k.negates(dst)); };
  return reroute(t, route, path);
}

TraceTree bind_split(const TraceTree& t, const Continuation& f, const TapeMapSpec& split) {
  if (split.dst_arity() < 2) throw TapeError("split sequencing needs a map with at least two destination components");
  auto via = [&](std::size_t component) {
    return [&split, component](const Address& a) {
      Address dst{component, a.index};
      return std::make_pair(split.source_of(dst), split.negates(dst));
    };
  };
  std::map<Address, bool> path;
  TraceTree first = reroute(t, via(0), path);
  auto second_route = via(1);
  return monad_bind(first, [&](const Code& x) {
    std::map<Address, bool> p;
    return reroute(f(x), second_route, p);
  });
}

}  // namespace tapekit
