#include "tapekit/eval.hpp"

#include <map>
#include <optional>
#include <vector>

namespace tapekit {

namespace {

struct OutOfFuel {};
struct Stuck {};
struct PendingRead {
  Address address;
};

std::size_t contraction_arity(Prim p) {
  switch (p) {
    case Prim::I:
    case Prim::Succ:
    case Prim::Pred:
    case Prim::Fst:
    case Prim::Snd:
    case Prim::Remap: return 1;
    case Prim::K:
    case Prim::Fix:
    case Prim::Read: return 2;
    case Prim::S:
    case Prim::IfZero:
    case Prim::IfBit: return 3;
    case Prim::Pair: return 2;
  }
  return 0;
}

// Bit sources: a concrete tape, or a partial assignment that reports the first
// unassigned address it is asked for.
class TapeSource {
 public:
  explicit TapeSource(const Tape& t) : tape_(t) {}
  std::size_t arity() const { return tape_.arity(); }
  bool read(const Address& a) const { return tape_.read(a); }

 private:
  const Tape& tape_;
};

class AssignmentSource {
 public:
  AssignmentSource(std::size_t arity, const std::map<Address, bool>& bits) : arity_(arity), bits_(bits) {}
  std::size_t arity() const { return arity_; }
  bool read(const Address& a) const {
    auto it = bits_.find(a);
    if (it == bits_.end()) throw PendingRead{a};
    return it->second;
  }

 private:
  std::size_t arity_;
  const std::map<Address, bool>& bits_;
};

template <typename Source>
class Machine {
 public:
  Machine(const Source& source, std::size_t fuel) : source_(source), fuel_(fuel) {}

  std::size_t steps() const { return steps_; }

  Code normalize(const Code& t) {
    Code w = whnf(t);
    if (w.kind() != Code::Kind::App) return w;
    std::vector<Code> args;
    Code head = w;
    while (head.kind() == Code::Kind::App) {
      args.push_back(head.arg());
      head = head.fn();
    }
    Code out = head;
    for (auto it = args.rbegin(); it != args.rend(); ++it) out = Code::app(out, normalize(*it));
    return out;
  }

 private:
  void tick() {
    if (steps_ == fuel_) throw OutOfFuel{};
    ++steps_;
  }

  // `args` holds pending arguments with the first one at the back.
  static Code rebuild(Code head, std::vector<Code>& args) {
    while (!args.empty()) {
      head = Code::app(std::move(head), std::move(args.back()));
      args.pop_back();
    }
    return head;
  }

  std::uint64_t strict_nat(const Code& c) {
    Code v = whnf(c);
    if (v.kind() != Code::Kind::Nat) throw Stuck{};
    return v.nat_value();
  }

  bool resolve_read(const std::vector<TapeMapSpec>& frames, std::uint64_t component, std::uint64_t index) {
    Address a{component, index};
    bool negate = false;
    auto step = [&](const TapeMapSpec& k) {
      if (a.component >= k.dst_arity()) throw Stuck{};
      negate = negate != k.negates(a);
      a = k.source_of(a);
    };
    for (const auto& k : frames) step(k);
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) step(*it);
    if (a.component >= source_.arity()) throw Stuck{};
    return source_.read(a) != negate;
  }

  Code whnf(Code t) {
    std::vector<Code> args;
    for (;;) {
      while (t.kind() == Code::Kind::App) {
        args.push_back(t.arg());
        t = t.fn();
      }
      switch (t.kind()) {
        case Code::Kind::Nat:
        case Code::Kind::Bit:
        case Code::Kind::Con:
          if (!args.empty()) throw Stuck{};
          return t;
        case Code::Kind::Var: throw Stuck{};
        case Code::Kind::App:
        case Code::Kind::Prim: break;
      }
      const Prim p = t.prim();
      const std::size_t need = contraction_arity(p);
      if (p == Prim::Pair) {
        if (args.size() > 2) throw Stuck{};
        return rebuild(t, args);
      }
      if (args.size() < need) return rebuild(t, args);
      auto pop = [&args] {
        Code a = std::move(args.back());
        args.pop_back();
        return a;
      };
      switch (p) {
        case Prim::I:
          tick();
          t = pop();
          break;
        case Prim::K: {
          Code x = pop();
          pop();
          tick();
          t = std::move(x);
          break;
        }
        case Prim::S: {
          Code x = pop();
          Code y = pop();
          Code z = pop();
          tick();
          t = Code::app(Code::app(std::move(x), z), Code::app(std::move(y), z));
          break;
        }
        case Prim::Succ: {
          std::uint64_t n = strict_nat(pop());
          tick();
          t = Code::nat(n + 1);
          break;
        }
        case Prim::Pred: {
          std::uint64_t n = strict_nat(pop());
          tick();
          t = Code::nat(n == 0 ? 0 : n - 1);
          break;
        }
        case Prim::IfZero: {
          std::uint64_t n = strict_nat(pop());
          Code a = pop();
          Code b = pop();
          tick();
          t = n == 0 ? std::move(a) : std::move(b);
          break;
        }
        case Prim::IfBit: {
          Code v = whnf(pop());
          if (v.kind() != Code::Kind::Bit) throw Stuck{};
          Code a = pop();
          Code b = pop();
          tick();
          t = v.bit_value() ? std::move(a) : std::move(b);
          break;
        }
        case Prim::Fst:
        case Prim::Snd: {
          Code v = whnf(pop());
          if (v.kind() != Code::Kind::App || v.fn().kind() != Code::Kind::App || !v.fn().fn().is_prim(Prim::Pair)) {
            throw Stuck{};
          }
          tick();
          t = p == Prim::Fst ? v.fn().arg() : v.arg();
          break;
        }
        case Prim::Fix: {
          Code f = pop();
          Code x = whnf(pop());
          tick();
          t = Code::app(Code::app(f, Code::app(Code::prim(Prim::Fix), f)), std::move(x));
          break;
        }
        case Prim::Read: {
          std::uint64_t c = strict_nat(pop());
          std::uint64_t i = strict_nat(pop());
          tick();
          t = Code::bit(resolve_read(t.maps(), c, i));
          break;
        }
        case Prim::Remap: {
          Code body = pop();
          tick();
          const std::size_t depth = scope_.size();
          for (auto it = t.maps().rbegin(); it != t.maps().rend(); ++it) scope_.push_back(*it);
          t = normalize(body);
          scope_.erase(scope_.begin() + static_cast<std::ptrdiff_t>(depth), scope_.end());
          break;
        }
        case Prim::Pair: break;
      }
    }
  }

  const Source& source_;
  std::size_t fuel_;
  std::size_t steps_ = 0;
  // Tape maps of the enclosing Remap contractions, outermost first.
  std::vector<TapeMapSpec> scope_;
};

template <typename Source>
Run run_with(const Code& c, const Source& source, std::size_t fuel) {
  Machine<Source> m(source, fuel);
  try {
    Code v = m.normalize(c);
    return Run{Outcome::value(std::move(v)), m.steps()};
  } catch (const OutOfFuel&) {
    return Run{Outcome::bottom(BottomReason::FuelExhausted), m.steps()};
  } catch (const Stuck&) {
    return Run{Outcome::bottom(BottomReason::Stuck), m.steps()};
  }
}

TraceTree build(const Code& c, std::size_t arity, std::size_t fuel, std::map<Address, bool>& assignment) {
  try {
    return TraceTree::leaf(run_with(c, AssignmentSource(arity, assignment), fuel).outcome);
  } catch (const PendingRead& pending) {
    const Address a = pending.address;
    assignment[a] = false;
    TraceTree zero = build(c, arity, fuel, assignment);
    assignment[a] = true;
    TraceTree one = build(c, arity, fuel, assignment);
    assignment.erase(a);
    return TraceTree::branch(a, std::move(zero), std::move(one));
  }
}

}  // namespace

Run run(const Code& c, const Tape& t, std::size_t fuel) { return run_with(c, TapeSource(t), fuel); }

Outcome eval(const Code& c, const Tape& t, std::size_t fuel) { return run(c, t, fuel).outcome; }

TraceTree trace(const Code& c, const TapeSpace& space, std::size_t fuel) {
  std::map<Address, bool> assignment;
  return build(c, space.arity(), fuel, assignment);
}

TraceTree mca_apply(const Code& c1, const Code& c2, const TapeSpace& space, std::size_t fuel) {
  return trace(Code::app(c1, c2), space, fuel);
}

Code translate_evidence(const TapeMapSpec& k, const Code& e) {
  return bracket_abstract("x", Code::remap(k, Code::app(e, Code::var("x"))));
}

}  // namespace tapekit
