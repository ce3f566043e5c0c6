#include "tapekit/generators.hpp"

#include <set>

namespace tapekit::gen {

std::size_t below(Engine& g, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(g() % n); }

bool coin(Engine& g) { return (g() & 1U) != 0; }

Rational unit_rational(Engine& g) {
  static const long dens[] = {1, 2, 3, 4, 8};
  const long den = dens[below(g, 5)];
  return rational(static_cast<long>(below(g, static_cast<std::size_t>(den) + 1)), den);
}

Address address(Engine& g, std::size_t arity, std::size_t max_index) {
  return Address{below(g, arity), below(g, max_index + 1)};
}

std::vector<Code> outcome_pool() {
  return {Code::con("H"), Code::con("T"), Code::con("U"), Code::nat(0), Code::nat(1), Code::bit(false),
          Code::bit(true)};
}

namespace {

TraceTree tree_at(Engine& g, const Settings& s, const std::vector<Code>& pool, std::set<Address>& used,
                  std::size_t depth) {
  if (depth < s.max_depth && below(g, 4) != 0) {
    Address a = address(g, s.arity, s.max_index);
    if (!used.count(a)) {
      used.insert(a);
      TraceTree z = tree_at(g, s, pool, used, depth + 1);
      TraceTree o = tree_at(g, s, pool, used, depth + 1);
      used.erase(a);
      return TraceTree::branch(a, std::move(z), std::move(o));
    }
  }
  if (below(g, 6) == 0) return TraceTree::leaf(Outcome::bottom(BottomReason::FuelExhausted));
  return TraceTree::leaf(Outcome::value(pool[below(g, pool.size())]));
}

void partition_at(Engine& g, const Settings& s, BitPattern& path, std::size_t depth, std::vector<Cell>& out) {
  if (depth < 3 && below(g, 3) != 0) {
    Address a = address(g, s.arity, s.max_index);
    if (!path.lookup(a)) {
      for (bool b : {false, true}) {
        BitPattern next = path;
        next.constrain(a, b);
        partition_at(g, s, next, depth + 1, out);
      }
      return;
    }
  }
  out.push_back(Cell{path, unit_rational(g)});
}

Code reader_at(Engine& g, std::size_t reads_left, std::size_t component, std::size_t max_index,
               std::set<std::size_t>& used) {
  if (reads_left > 0 && below(g, 4) != 0) {
    const std::size_t i = below(g, max_index + 1);
    if (!used.count(i)) {
      used.insert(i);
      Code a = reader_at(g, reads_left - 1, component, max_index, used);
      Code b = reader_at(g, reads_left - 1, component, max_index, used);
      used.erase(i);
      return Code::apps(Code::prim(Prim::IfBit), {Code::read(component, i), a, b});
    }
  }
  static const char* names[] = {"H", "T", "U"};
  switch (below(g, 4)) {
    case 0: return Code::bit(coin(g));
    default: return Code::con(names[below(g, 3)]);
  }
}

}  // namespace

TraceTree tree(Engine& g, const Settings& s, const std::vector<Code>& pool) {
  std::set<Address> used;
  return tree_at(g, s, pool, used, 0);
}

TruthValue truth_value(Engine& g, const Settings& s, bool with_exceptions) {
  std::vector<Cell> cells;
  BitPattern root;
  partition_at(g, s, root, 0, cells);
  std::map<Tape, Rational> ex;
  if (with_exceptions) {
    for (std::size_t n = below(g, 3); n > 0; --n) ex[tape(g, s.arity)] = unit_rational(g);
  }
  return TruthValue(s.arity, std::move(cells), std::move(ex));
}

Tape tape(Engine& g, std::size_t arity, std::size_t max_prefix) {
  std::vector<Stream> streams;
  for (std::size_t c = 0; c < arity; ++c) {
    Stream st;
    for (std::size_t n = below(g, max_prefix + 1); n > 0; --n) st.prefix.push_back(coin(g));
    for (std::size_t n = 1 + below(g, 2); n > 0; --n) st.period.push_back(coin(g));
    streams.push_back(std::move(st));
  }
  return Tape(std::move(streams));
}

Code code(Engine& g, std::size_t budget, std::size_t arity) {
  if (budget <= 1 || below(g, 3) == 0) {
    switch (below(g, 12)) {
      case 0: return Code::S();
      case 1: return Code::K();
      case 2: return Code::I();
      case 3: return Code::con(coin(g) ? "H" : "T");
      case 4: return Code::nat(below(g, 3));
      case 5: return Code::bit(coin(g));
      case 6: return Code::read(below(g, arity), below(g, 4));
      case 7: return Code::prim(Prim::Pair);
      case 8: return Code::prim(Prim::Fst);
      case 9: return Code::prim(Prim::Succ);
      case 10: return Code::prim(Prim::IfBit);
      default: return Code::prim(Prim::IfZero);
    }
  }
  const std::size_t left = 1 + below(g, budget - 1);
  return Code::app(code(g, left, arity), code(g, budget - left, arity));
}

Code reader(Engine& g, std::size_t max_reads, std::size_t component, std::size_t max_index) {
  std::set<std::size_t> used;
  return reader_at(g, max_reads, component, max_index, used);
}

}  // namespace tapekit::gen
