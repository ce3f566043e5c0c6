#include "tapekit/truth.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace tapekit {

namespace {

Rational fair_mass(const BitPattern& p) { return dyadic(static_cast<unsigned>(p.size())); }

BitPattern without(const BitPattern& p, const Address& drop) {
  BitPattern out;
  for (const auto& [a, b] : p.constraints()) {
    if (a != drop) out.constrain(a, b);
  }
  return out;
}

// Merges sibling cells (same value, patterns equal except for one address
// constrained both ways) until none remain.
std::vector<Cell> coalesce(std::vector<Cell> cells) {
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<Address, BitPattern>, std::pair<std::optional<std::size_t>, std::optional<std::size_t>>>
        siblings;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (const auto& [a, b] : cells[i].pattern.constraints()) {
        auto& slot = siblings[{a, without(cells[i].pattern, a)}];
        (b ? slot.second : slot.first) = i;
      }
    }
    std::vector<bool> used(cells.size(), false);
    std::vector<Cell> next;
    for (const auto& [key, pair] : siblings) {
      if (!pair.first || !pair.second) continue;
      const std::size_t i = *pair.first;
      const std::size_t j = *pair.second;
      if (used[i] || used[j] || cells[i].value != cells[j].value) continue;
      used[i] = used[j] = true;
      next.push_back(Cell{key.second, cells[i].value});
      changed = true;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!used[i]) next.push_back(std::move(cells[i]));
    }
    cells = std::move(next);
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.pattern < y.pattern; });
  return cells;
}

const Cell& covering_cell(const std::vector<Cell>& cells, const Tape& t) {
  for (const auto& c : cells) {
    if (c.pattern.matches(t)) return c;
  }
  throw TapeError("truth value has no cell covering tape " + t.to_string());
}

template <typename Visit>
void for_each_refined(const TruthValue& a, const TruthValue& b, const Visit& visit) {
  for (const auto& x : a.cells()) {
    for (const auto& y : b.cells()) {
      if (auto p = x.pattern.intersect(y.pattern)) visit(*p, x.value, y.value);
    }
  }
}

std::set<Tape> exception_tapes(const TruthValue& a, const TruthValue& b) {
  std::set<Tape> out;
  for (const auto& kv : a.exceptions()) out.insert(kv.first);
  for (const auto& kv : b.exceptions()) out.insert(kv.first);
  return out;
}

void require_same_space(const TruthValue& a, const TruthValue& b) {
  if (a.arity() != b.arity()) {
    throw TapeError("truth values over different tape spaces (arity " + std::to_string(a.arity()) + " vs " +
                    std::to_string(b.arity()) + ")");
  }
}

}  // namespace

TruthValue::TruthValue(std::size_t arity, std::vector<Cell> cells, std::map<Tape, Rational> exceptions,
                       std::vector<std::string> notes)
    : arity_(arity), notes_(std::move(notes)) {
  if (arity == 0) throw TapeError("tape space arity must be at least 1");
  Rational mass = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (!in_unit_interval(c.value)) throw TapeError("truth value " + tapekit::to_string(c.value) + " outside [0,1]");
    if (!c.pattern.empty() && c.pattern.max_component() >= arity) {
      throw TapeError("cell " + c.pattern.to_string() + " reads outside arity " + std::to_string(arity));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (cells[j].pattern.compatible(c.pattern)) {
        throw TapeError("cells " + cells[j].pattern.to_string() + " and " + c.pattern.to_string() + " overlap");
      }
    }
    mass += fair_mass(c.pattern);
  }
  if (mass != 1) throw TapeError("cells do not cover the tape space");
  cells_ = coalesce(std::move(cells));
  for (auto& [t, v] : exceptions) {
    if (t.arity() != arity) throw TapeError("exception tape " + t.to_string() + " has the wrong arity");
    if (!in_unit_interval(v)) throw TapeError("truth value " + tapekit::to_string(v) + " outside [0,1]");
    if (covering_cell(cells_, t).value != v) exceptions_.emplace(t, v);
  }
}

TruthValue TruthValue::constant(std::size_t arity, const Rational& v) {
  return TruthValue(arity, {Cell{BitPattern{}, v}});
}

TruthValue TruthValue::indicator(std::size_t arity, const BitPattern& p, const Rational& inside,
                                 const Rational& outside) {
  // Complement of a conjunction as disjoint cells: first constraint violated
  // at position i, all earlier ones satisfied.
  std::vector<Cell> cells{Cell{p, inside}};
  BitPattern prefix;
  for (const auto& [a, b] : p.constraints()) {
    BitPattern miss = prefix;
    miss.constrain(a, !b);
    cells.push_back(Cell{miss, outside});
    prefix.constrain(a, b);
  }
  return TruthValue(arity, std::move(cells));
}

TruthValue TruthValue::without_exceptions() const { return TruthValue(arity_, cells_, {}, notes_); }

TruthValue TruthValue::with_exception(const Tape& t, const Rational& v) const {
  auto ex = exceptions_;
  ex[t] = v;
  return TruthValue(arity_, cells_, std::move(ex), notes_);
}

std::string TruthValue::to_string() const {
  std::string out;
  for (const auto& c : cells_) {
    if (!out.empty()) out += "; ";
    out += c.pattern.to_string() + " -> " + tapekit::to_string(c.value);
  }
  for (const auto& [t, v] : exceptions_) out += "; @" + t.to_string() + " -> " + tapekit::to_string(v);
  return out;
}

Rational tv_eval(const TruthValue& v, const Tape& t) {
  if (t.arity() != v.arity()) throw TapeError("tape " + t.to_string() + " is not in the truth value's space");
  if (auto it = v.exceptions().find(t); it != v.exceptions().end()) return it->second;
  return covering_cell(v.cells(), t).value;
}

TruthValue tv_combine(const TruthValue& a, const TruthValue& b,
                      const std::function<Rational(const Rational&, const Rational&)>& op) {
  require_same_space(a, b);
  std::vector<Cell> cells;
  for_each_refined(a, b, [&](const BitPattern& p, const Rational& x, const Rational& y) {
    cells.push_back(Cell{p, op(x, y)});
  });
  std::map<Tape, Rational> ex;
  for (const auto& t : exception_tapes(a, b)) ex.emplace(t, op(tv_eval(a, t), tv_eval(b, t)));
  std::vector<std::string> notes = a.notes();
  for (const auto& n : b.notes()) {
    if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
  }
  return TruthValue(a.arity(), std::move(cells), std::move(ex), std::move(notes));
}

TruthValue tv_meet(const TruthValue& a, const TruthValue& b) {
  return tv_combine(a, b, [](const Rational& x, const Rational& y) { return x < y ? x : y; });
}

TruthValue tv_join(const TruthValue& a, const TruthValue& b) {
  return tv_combine(a, b, [](const Rational& x, const Rational& y) { return x < y ? y : x; });
}

TruthValue tv_impl(const TruthValue& a, const TruthValue& b) {
  return tv_combine(a, b, [](const Rational& x, const Rational& y) { return x <= y ? Rational(1) : y; });
}

bool operator==(const TruthValue& a, const TruthValue& b) {
  if (a.arity() != b.arity()) return false;
  bool equal = true;
  for_each_refined(a, b, [&](const BitPattern&, const Rational& x, const Rational& y) {
    if (x != y) equal = false;
  });
  if (!equal) return false;
  for (const auto& t : exception_tapes(a, b)) {
    if (tv_eval(a, t) != tv_eval(b, t)) return false;
  }
  return true;
}

std::string Violation::where() const { return tape ? "tape " + tape->to_string() : "pattern " + pattern.to_string(); }

std::optional<Violation> tv_leq_violation(const TruthValue& a, const TruthValue& b) {
  require_same_space(a, b);
  std::optional<Violation> v;
  for_each_refined(a, b, [&](const BitPattern& p, const Rational& x, const Rational& y) {
    if (!v && x > y) v = Violation{p, std::nullopt, x, y};
  });
  if (v) return v;
  for (const auto& t : exception_tapes(a, b)) {
    Rational x = tv_eval(a, t);
    Rational y = tv_eval(b, t);
    if (x > y) return Violation{BitPattern{}, t, x, y};
  }
  return std::nullopt;
}

void require_nondegenerate(const ProductMeasure& m, const char* what) {
  if (!m.nondegenerate()) {
    throw DegenerateMeasureError(std::string(what) + " needs a measure with every bias strictly inside (0,1)");
  }
}

std::optional<Violation> tv_leq_as_violation(const TruthValue& a, const TruthValue& b, const ProductMeasure& m) {
  require_nondegenerate(m, "almost-sure comparison");
  require_same_space(a, b);
  std::optional<Violation> v;
  for_each_refined(a, b, [&](const BitPattern& p, const Rational& x, const Rational& y) {
    if (!v && x > y && pattern_measure(m, p) > 0) v = Violation{p, std::nullopt, x, y};
  });
  return v;
}

bool tv_leq(const TruthValue& a, const TruthValue& b) { return !tv_leq_violation(a, b); }

bool tv_leq_as(const TruthValue& a, const TruthValue& b, const ProductMeasure& m) {
  return !tv_leq_as_violation(a, b, m);
}

bool as_equiv(const TruthValue& a, const TruthValue& b, const ProductMeasure& m) {
  return tv_leq_as(a, b, m) && tv_leq_as(b, a, m);
}

namespace {

TruthValue fold(const std::vector<TruthValue>& family, const char* what,
                TruthValue (*op)(const TruthValue&, const TruthValue&)) {
  if (family.empty()) throw std::invalid_argument(std::string(what) + " of an empty family");
  TruthValue acc = family.front().without_exceptions();
  for (std::size_t i = 1; i < family.size(); ++i) acc = op(acc, family[i].without_exceptions());
  return acc;
}

}  // namespace

TruthValue ess_sup(const std::vector<TruthValue>& family) { return fold(family, "ess_sup", tv_join); }

TruthValue ess_inf(const std::vector<TruthValue>& family) { return fold(family, "ess_inf", tv_meet); }

TruthValue tv_pullback(const TapeMapSpec& k, const TruthValue& v) {
  if (v.arity() != k.dst_arity()) {
    throw TapeError("truth value of arity " + std::to_string(v.arity()) + " is not over the destination of " +
                    k.name());
  }
  std::vector<Cell> cells;
  for (const auto& c : v.cells()) {
    if (auto p = preimage_pattern(k, c.pattern)) cells.push_back(Cell{*p, c.value});
  }
  std::map<Tape, Rational> ex;
  std::vector<std::string> notes = v.notes();
  for (const auto& [t, val] : v.exceptions()) {
    auto pre = tape_preimage(k, t);
    if (!pre) {
      notes.push_back("exception at " + t.to_string() + " dropped: its preimage under " + k.name() +
                      " has no finite eventually-periodic description");
      continue;
    }
    for (const auto& s : *pre) ex.emplace(s, val);
  }
  return TruthValue(k.src_arity(), std::move(cells), std::move(ex), std::move(notes));
}

}  // namespace tapekit
