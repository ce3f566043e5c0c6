#include "tapekit/casebook.hpp"

#include <functional>

namespace tapekit {

const char* vn_source() {
  return R"((app (fix (lam self (lam j
  (ifbit (ifbit (read 0 j) (ifbit (read 0 (succ j)) #1 #0) (ifbit (read 0 (succ j)) #0 #1))
         (self (succ (succ j)))
         (ifbit (read 0 (succ j)) H T)))))
  0))";
}

VnFixture build_vn(std::size_t k) {
  if (k == 0) throw std::invalid_argument("vn needs at least one pair");
  return VnFixture{k, parse_code(vn_source()), kVnFuelBase + kVnFuelPerPair * k};
}

Code VnFixture::wrapper() const { return Code::app(Code::K(), code); }

TraceTree VnFixture::trace() const { return tapekit::trace(code, TapeSpace(1), fuel); }

TruthValue VnFixture::alpha_h() const { return diamond(trace(), Proposition::crisp({Code::con("H")}), 1); }

TruthValue VnFixture::alpha_t() const { return diamond(trace(), Proposition::crisp({Code::con("T")}), 1); }

namespace {

Outcome swap_outcome(const Outcome& o) {
  if (o.is_bottom()) return o;
  if (o.code() == Code::con("H")) return Outcome::value(Code::con("T"));
  if (o.code() == Code::con("T")) return Outcome::value(Code::con("H"));
  return o;
}

bool iid(const ProductMeasure& m) { return m.overrides().empty() && m.component_defaults().empty(); }

Rational power(const Rational& x, std::size_t n) {
  Rational out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= x;
  return out;
}

Rational binomial(std::size_t n, std::size_t r) {
  Rational out = 1;
  for (std::size_t i = 0; i < r; ++i) out = out * static_cast<long>(n - i) / static_cast<long>(i + 1);
  return out;
}

}  // namespace

VnFairnessReport vn_fairness_report(std::size_t k, const ProductMeasure& m) {
  const VnFixture vn = build_vn(k);
  const TraceTree tree = vn.trace();
  const Proposition h = Proposition::crisp({Code::con("H")});
  const Proposition t = Proposition::crisp({Code::con("T")});
  const TruthValue ah = diamond(tree, h, 1);
  const TruthValue at = diamond(tree, t, 1);
  VnFairnessReport r{k, law(tree, m), expect(ah, m), expect(at, m), false, true, std::nullopt};
  r.flip_symmetry = tv_pullback(TapeMapSpec::flip(), ah) == at;

  const TapeMapSpec flip = TapeMapSpec::flip();
  const std::size_t bits = 2 * k;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << bits) && r.swap_conjugation; ++w) {
    std::vector<bool> prefix(bits);
    for (std::size_t i = 0; i < bits; ++i) prefix[i] = ((w >> i) & 1U) != 0;
    const Tape tape = Tape::from_prefix(prefix);
    r.swap_conjugation = eval(vn.code, apply_tapemap(flip, tape), vn.fuel) == swap_outcome(eval(vn.code, tape, vn.fuel));
  }

  if (iid(m)) {
    const Rational p = m.default_bias();
    const Rational q = 2 * p * (1 - p);
    const Rational each = (1 - power(1 - q, k)) / 2;
    r.closed_form = r.expect_h == each && r.expect_t == each;
  }
  return r;
}

Code default_base_verifier() { return parse_code("(lam c (read 0 0))"); }

MajorityFixture build_majority(std::size_t k, std::size_t t, const Code& base, const std::set<Code>& accept,
                               std::size_t fuel) {
  if (t < 1 || t > k) throw std::invalid_argument("majority threshold must satisfy 1 <= t <= k");
  for (const auto& a : accept) {
    if (a.kind() != Code::Kind::Bit) throw std::invalid_argument("majority accept set may only contain bits");
  }
  const Code acc = Code::bit(true);
  const Code rej = Code::bit(false);
  const Code x = Code::var("x");
  std::function<Code(std::size_t, std::size_t)> count = [&](std::size_t i, std::size_t hits) -> Code {
    if (hits >= t) return acc;
    if (hits + (k - i) < t) return rej;
    Code run = Code::app(Code::remap_op({TapeMapSpec::projection(k, i)}), Code::app(base, x));
    Code on_one = accept.count(Code::bit(true)) ? count(i + 1, hits + 1) : count(i + 1, hits);
    Code on_zero = accept.count(Code::bit(false)) ? count(i + 1, hits + 1) : count(i + 1, hits);
    return Code::apps(Code::prim(Prim::IfBit), {run, on_one, on_zero});
  };
  return MajorityFixture{k, t, base, Code::con("C"), accept, bracket_abstract("x", count(0, 0)), fuel};
}

TruthValue MajorityFixture::base_acceptance() const {
  return diamond(trace(Code::app(base, input), TapeSpace(1), fuel), Proposition::crisp(accept), 1);
}

TruthValue MajorityFixture::threshold_predicate() const {
  std::vector<TruthValue> runs;
  const TruthValue one = base_acceptance();
  for (std::size_t i = 0; i < repetitions; ++i) runs.push_back(tv_pullback(TapeMapSpec::projection(repetitions, i), one));
  TruthValue out = TruthValue::constant(repetitions, 0);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << repetitions); ++s) {
    if (static_cast<std::size_t>(__builtin_popcountll(s)) != threshold) continue;
    TruthValue all = TruthValue::constant(repetitions, 1);
    for (std::size_t i = 0; i < repetitions; ++i) {
      if ((s >> i) & 1U) all = tv_meet(all, runs[i]);
    }
    out = tv_join(out, all);
  }
  return out;
}

EntailmentJudgment MajorityFixture::judgment() const {
  return check_entailment(Proposition::table({{input, threshold_predicate()}}), verifier,
                          Proposition::crisp({Code::bit(true)}), {input}, repetitions, fuel, Mode::Pointwise);
}

MajorityReport majority_report(const MajorityFixture& f, const Rational& p) {
  if (!in_unit_interval(p)) throw std::invalid_argument("bias must lie in [0,1]");
  const ProductMeasure m(p);
  MajorityReport r;
  r.bias = p;
  r.base = expect(f.base_acceptance(), m);
  const EntailmentJudgment j = f.judgment();
  r.judgment_holds = j.holds;
  r.amplified = expect(diamond(mca_apply(j.evidence, f.input, TapeSpace(f.repetitions), j.fuel), j.psi, j.arity), m);
  if (j.holds) {
    const EntailmentJudgment moved = transport_entailment(j, TapeMapSpec::split(f.repetitions));
    r.transported_holds = moved.holds;
    r.transported = expect(diamond(mca_apply(moved.evidence, f.input, TapeSpace(1), moved.fuel), moved.psi, 1), m);
  }
  r.closed_form = 0;
  for (std::size_t i = f.threshold; i <= f.repetitions; ++i) {
    r.closed_form += binomial(f.repetitions, i) * power(r.base, i) * power(1 - r.base, f.repetitions - i);
  }
  return r;
}

}  // namespace tapekit
