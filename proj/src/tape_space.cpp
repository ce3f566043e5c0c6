#include "tapekit/tape_space.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace tapekit {

std::string to_string(const Address& a) {
  return std::to_string(a.component) + "," + std::to_string(a.index);
}

// ---------------------------------------------------------------------------
// Tape

namespace {

std::vector<bool> primitive_root(const std::vector<bool>& w) {
  const std::size_t n = w.size();
  for (std::size_t q = 1; q < n; ++q) {
    if (n % q != 0) continue;
    bool ok = true;
    for (std::size_t i = q; i < n && ok; ++i) ok = w[i] == w[i - q];
    if (ok) return {w.begin(), w.begin() + static_cast<std::ptrdiff_t>(q)};
  }
  return w;
}

Stream canonical(Stream s) {
  if (s.period.empty()) throw TapeError("periodic tail must be nonempty");
  s.period = primitive_root(s.period);
  while (!s.prefix.empty() && s.prefix.back() == s.period.back()) {
    s.prefix.pop_back();
    std::rotate(s.period.rbegin(), s.period.rbegin() + 1, s.period.rend());
  }
  return s;
}

std::vector<bool> parse_bits(std::string_view s, std::string_view whole) {
  std::vector<bool> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw TapeError("bad bit in tape literal '" + std::string(whole) + "'");
    bits.push_back(ch == '1');
  }
  return bits;
}

Stream parse_stream(std::string_view lit) {
  auto colon = lit.find(':');
  if (colon == std::string_view::npos) throw TapeError("tape literal needs ':' in '" + std::string(lit) + "'");
  Stream s;
  s.prefix = parse_bits(lit.substr(0, colon), lit);
  std::string_view tail = lit.substr(colon + 1);
  if (tail == "0" || tail == "1") {
    s.period = {tail == "1"};
  } else if (tail.size() >= 4 && tail.front() == '(' && tail.substr(tail.size() - 2) == ")*") {
    s.period = parse_bits(tail.substr(1, tail.size() - 3), lit);
    if (s.period.empty()) throw TapeError("empty periodic tail in '" + std::string(lit) + "'");
  } else {
    throw TapeError("bad tail in tape literal '" + std::string(lit) + "'");
  }
  return s;
}

std::string bits_text(const std::vector<bool>& bits) {
  std::string out;
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

}  // namespace

Tape::Tape(std::vector<Stream> streams) : streams_(std::move(streams)) {
  if (streams_.empty()) throw TapeError("a tape needs at least one stream");
  for (auto& s : streams_) s = canonical(std::move(s));
}

Tape Tape::constant(std::size_t arity, bool bit) {
  return Tape(std::vector<Stream>(arity, Stream{{}, {bit}}));
}

Tape Tape::from_prefix(const std::vector<bool>& prefix, bool tail) {
  return Tape({Stream{prefix, {tail}}});
}

Tape Tape::parse(std::string_view literal) {
  std::vector<Stream> streams;
  std::size_t start = 0;
  while (true) {
    auto bar = literal.find('|', start);
    streams.push_back(parse_stream(literal.substr(start, bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return Tape(std::move(streams));
}

std::string Tape::to_string() const {
  std::string out;
  for (std::size_t c = 0; c < streams_.size(); ++c) {
    if (c) out.push_back('|');
    const auto& s = streams_[c];
    out += bits_text(s.prefix);
    out.push_back(':');
    if (s.period.size() == 1) {
      out.push_back(s.period[0] ? '1' : '0');
    } else {
      out += "(" + bits_text(s.period) + ")*";
    }
  }
  return out;
}

bool Tape::read(const Address& a) const {
  if (a.component >= streams_.size()) {
    throw TapeError("address component " + std::to_string(a.component) + " out of range for arity " +
                    std::to_string(streams_.size()));
  }
  return streams_[a.component].at(a.index);
}

bool tape_read(const Tape& t, const Address& a) { return t.read(a); }

// ---------------------------------------------------------------------------
// BitPattern

bool BitPattern::constrain(const Address& a, bool bit) {
  auto [it, inserted] = bits_.emplace(a, bit);
  return inserted || it->second == bit;
}

std::optional<bool> BitPattern::lookup(const Address& a) const {
  auto it = bits_.find(a);
  if (it == bits_.end()) return std::nullopt;
  return it->second;
}

bool BitPattern::matches(const Tape& t) const {
  return std::all_of(bits_.begin(), bits_.end(),
                     [&](const auto& kv) { return t.read(kv.first) == kv.second; });
}

bool BitPattern::compatible(const BitPattern& other) const {
  const auto& small = size() <= other.size() ? *this : other;
  const auto& large = size() <= other.size() ? other : *this;
  for (const auto& [a, b] : small.bits_) {
    auto v = large.lookup(a);
    if (v && *v != b) return false;
  }
  return true;
}

std::optional<BitPattern> BitPattern::intersect(const BitPattern& other) const {
  BitPattern out = *this;
  for (const auto& [a, b] : other.bits_) {
    if (!out.constrain(a, b)) return std::nullopt;
  }
  return out;
}

bool BitPattern::refines(const BitPattern& other) const {
  return std::all_of(other.bits_.begin(), other.bits_.end(), [&](const auto& kv) {
    auto v = lookup(kv.first);
    return v && *v == kv.second;
  });
}

std::size_t BitPattern::max_component() const {
  std::size_t m = 0;
  for (const auto& kv : bits_) m = std::max(m, kv.first.component);
  return m;
}

std::string BitPattern::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, b] : bits_) {
    if (!first) out += " ";
    first = false;
    out += "(" + tapekit::to_string(a) + ")=" + (b ? "1" : "0");
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// ProductMeasure

namespace {

void check_bias(const Rational& b) {
  if (!in_unit_interval(b)) throw TapeError("bias " + to_string(b) + " outside [0,1]");
}

}  // namespace

ProductMeasure::ProductMeasure(Rational default_bias) : default_bias_(std::move(default_bias)) {
  check_bias(default_bias_);
}

ProductMeasure& ProductMeasure::set_component_default(std::size_t component, Rational bias) {
  check_bias(bias);
  component_defaults_[component] = std::move(bias);
  return *this;
}

ProductMeasure& ProductMeasure::set_override(const Address& a, Rational bias) {
  check_bias(bias);
  overrides_[a] = std::move(bias);
  return *this;
}

Rational ProductMeasure::bias(const Address& a) const {
  if (auto it = overrides_.find(a); it != overrides_.end()) return it->second;
  if (auto it = component_defaults_.find(a.component); it != component_defaults_.end()) return it->second;
  return default_bias_;
}

bool ProductMeasure::nondegenerate() const {
  if (!in_open_unit_interval(default_bias_)) return false;
  for (const auto& kv : component_defaults_) {
    if (!in_open_unit_interval(kv.second)) return false;
  }
  for (const auto& kv : overrides_) {
    if (!in_open_unit_interval(kv.second)) return false;
  }
  return true;
}

ProductMeasure ProductMeasure::marginal(std::size_t component) const {
  ProductMeasure out;
  auto it = component_defaults_.find(component);
  out.default_bias_ = it != component_defaults_.end() ? it->second : default_bias_;
  for (const auto& [a, b] : overrides_) {
    if (a.component == component) out.overrides_[Address{0, a.index}] = b;
  }
  return out;
}

Rational pattern_measure(const ProductMeasure& m, const BitPattern& p) {
  Rational acc = 1;
  for (const auto& [a, bit] : p.constraints()) {
    Rational b = m.bias(a);
    acc *= bit ? b : Rational(1 - b);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// TapeMapSpec

TapeMapSpec::TapeMapSpec(std::size_t src_arity, std::size_t dst_arity, std::vector<AddressRule> rules,
                         std::string name)
    : src_arity_(src_arity), dst_arity_(dst_arity), rules_(std::move(rules)), name_(std::move(name)) {
  if (src_arity_ == 0 || dst_arity_ == 0) throw TapeError("tape map arities must be at least 1");
  if (rules_.size() != dst_arity_) throw TapeError("tape map needs one address rule per destination component");
  for (const auto& r : rules_) {
    if (r.source_component >= src_arity_) throw TapeError("address rule reads a missing source component");
    if (r.stride == 0 || r.divisor == 0) throw TapeError("address rule stride and divisor must be >= 1");
  }
}

TapeMapSpec TapeMapSpec::identity(std::size_t arity) {
  std::vector<AddressRule> rules;
  for (std::size_t i = 0; i < arity; ++i) rules.push_back(AddressRule{i, 1, 1, 0, false});
  return TapeMapSpec(arity, arity, std::move(rules), arity == 1 ? "identity" : "identity:" + std::to_string(arity));
}

TapeMapSpec TapeMapSpec::flip(std::size_t arity) {
  std::vector<AddressRule> rules;
  for (std::size_t i = 0; i < arity; ++i) rules.push_back(AddressRule{i, 1, 1, 0, true});
  return TapeMapSpec(arity, arity, std::move(rules), arity == 1 ? "flip" : "flip:" + std::to_string(arity));
}

TapeMapSpec TapeMapSpec::drop(std::size_t k) {
  return TapeMapSpec(1, 1, {AddressRule{0, 1, 1, k, false}}, "drop:" + std::to_string(k));
}

TapeMapSpec TapeMapSpec::split(std::size_t k) {
  if (k == 0) throw TapeError("split arity must be at least 1");
  std::vector<AddressRule> rules;
  for (std::size_t i = 0; i < k; ++i) rules.push_back(AddressRule{0, k, 1, i, false});
  return TapeMapSpec(1, k, std::move(rules), "split:" + std::to_string(k));
}

TapeMapSpec TapeMapSpec::block(std::size_t b) {
  if (b == 0) throw TapeError("block size must be at least 1");
  return TapeMapSpec(1, 1, {AddressRule{0, 1, b, 0, false}}, "block:" + std::to_string(b));
}

TapeMapSpec TapeMapSpec::projection(std::size_t arity, std::size_t component) {
  if (component >= arity) throw TapeError("projection component out of range");
  return TapeMapSpec(arity, 1, {AddressRule{component, 1, 1, 0, false}},
                     "proj:" + std::to_string(arity) + ":" + std::to_string(component));
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw TapeError("bad number in tape map name '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

TapeMapSpec TapeMapSpec::from_name(std::string_view name) {
  auto colon = name.find(':');
  std::string_view head = name.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
  if (head == "identity") return identity(arg.empty() ? 1 : parse_count(arg, name));
  if (head == "flip") return flip(arg.empty() ? 1 : parse_count(arg, name));
  if (!arg.empty()) {
    if (head == "drop") return drop(parse_count(arg, name));
    if (head == "split") return split(parse_count(arg, name));
    if (head == "block") return block(parse_count(arg, name));
    if (head == "proj") {
      auto c2 = arg.find(':');
      if (c2 == std::string_view::npos) throw TapeError("proj needs proj:<arity>:<component>");
      return projection(parse_count(arg.substr(0, c2), name), parse_count(arg.substr(c2 + 1), name));
    }
  }
  throw TapeError("unknown tape map '" + std::string(name) + "'");
}

TapeMapSpec TapeMapSpec::compose(const TapeMapSpec& first, const TapeMapSpec& second) {
  if (first.dst_arity_ != second.src_arity_) throw TapeError("composed tape maps have mismatched arities");
  std::vector<AddressRule> rules;
  for (const auto& r2 : second.rules_) {
    const auto& r1 = first.rules_[r2.source_component];
    if (r1.divisor != 1) throw UnsupportedError("composition after a block map is not affine");
    rules.push_back(AddressRule{r1.source_component, r1.stride * r2.stride, r2.divisor,
                                r1.stride * r2.offset + r1.offset, r1.negate != r2.negate});
  }
  return TapeMapSpec(first.src_arity_, second.dst_arity_, std::move(rules), first.name_ + ";" + second.name_);
}

Address TapeMapSpec::source_of(const Address& dst) const {
  if (dst.component >= dst_arity_) {
    throw TapeError("address component " + std::to_string(dst.component) + " outside map destination arity " +
                    std::to_string(dst_arity_));
  }
  const auto& r = rules_[dst.component];
  return Address{r.source_component, r.source_index(dst.index)};
}

bool TapeMapSpec::injective() const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].divisor != 1) return false;
    for (std::size_t j = i + 1; j < rules_.size(); ++j) {
      const auto& a = rules_[i];
      const auto& b = rules_[j];
      if (a.source_component != b.source_component) continue;
      // The progressions s_a n + o_a and s_b m + o_b meet iff the offsets agree
      // modulo gcd(s_a, s_b); solutions then recur upward without bound.
      std::size_t g = std::gcd(a.stride, b.stride);
      std::size_t diff = a.offset > b.offset ? a.offset - b.offset : b.offset - a.offset;
      if (diff % g == 0) return false;
    }
  }
  return true;
}

Tape apply_tapemap(const TapeMapSpec& k, const Tape& t) {
  if (t.arity() != k.src_arity()) {
    throw TapeError("tape arity " + std::to_string(t.arity()) + " does not match map source arity " +
                    std::to_string(k.src_arity()));
  }
  std::vector<Stream> out;
  out.reserve(k.dst_arity());
  for (const auto& r : k.rules()) {
    const Stream& src = t.streams()[r.source_component];
    const std::size_t plen = src.prefix.size();
    // First block index whose source index lands in the periodic tail.
    std::size_t q0 = plen > r.offset ? (plen - r.offset + r.stride - 1) / r.stride : 0;
    std::size_t n0 = q0 * r.divisor;
    std::size_t period = r.divisor * src.period.size();
    Stream s;
    for (std::size_t n = 0; n < n0; ++n) s.prefix.push_back(src.at(r.source_index(n)) != r.negate);
    for (std::size_t n = n0; n < n0 + period; ++n) s.period.push_back(src.at(r.source_index(n)) != r.negate);
    out.push_back(std::move(s));
  }
  return Tape(std::move(out));
}

std::optional<BitPattern> preimage_pattern(const TapeMapSpec& k, const BitPattern& p) {
  BitPattern out;
  for (const auto& [a, bit] : p.constraints()) {
    if (!out.constrain(k.source_of(a), bit != k.negates(a))) return std::nullopt;
  }
  return out;
}

ProductMeasure pushforward_measure(const TapeMapSpec& k, const ProductMeasure& m) {
  if (!k.injective()) {
    throw UnsupportedError("pushforward along non-injective tape map '" + k.name() + "' is not supported");
  }
  auto component_default = [&](std::size_t c) {
    auto it = m.component_defaults().find(c);
    return it != m.component_defaults().end() ? it->second : m.default_bias();
  };
  std::vector<Rational> defaults;
  for (const auto& r : k.rules()) {
    Rational b = component_default(r.source_component);
    defaults.push_back(r.negate ? Rational(1 - b) : b);
  }
  bool uniform = std::all_of(defaults.begin(), defaults.end(), [&](const Rational& d) { return d == defaults[0]; });
  ProductMeasure out(uniform ? defaults[0] : m.default_bias());
  if (!uniform) {
    for (std::size_t i = 0; i < defaults.size(); ++i) out.set_component_default(i, defaults[i]);
  }
  for (const auto& [src, b] : m.overrides()) {
    for (std::size_t i = 0; i < k.rules().size(); ++i) {
      const auto& r = k.rules()[i];
      if (r.source_component != src.component || src.index < r.offset) continue;
      if ((src.index - r.offset) % r.stride != 0) continue;
      out.set_override(Address{i, (src.index - r.offset) / r.stride}, r.negate ? Rational(1 - b) : b);
    }
  }
  return out;
}

std::optional<std::vector<Tape>> tape_preimage(const TapeMapSpec& k, const Tape& t, std::size_t max_free_bits) {
  if (t.arity() != k.dst_arity()) throw TapeError("tape arity does not match map destination arity");
  std::vector<std::vector<bool>> prefixes(k.src_arity());
  std::vector<std::vector<bool>> periods(k.src_arity());
  std::vector<Address> free_bits;

  for (std::size_t c = 0; c < k.src_arity(); ++c) {
    std::vector<std::size_t> readers;
    for (std::size_t i = 0; i < k.rules().size(); ++i) {
      if (k.rules()[i].source_component == c) readers.push_back(i);
    }
    if (readers.empty()) return std::nullopt;

    std::size_t coverage = 1, max_offset = 0, period = 1, start = 0;
    for (std::size_t i : readers) {
      const auto& r = k.rules()[i];
      const auto& dst = t.streams()[i];
      coverage = std::lcm(coverage, r.stride);
      max_offset = std::max(max_offset, r.offset);
      period = std::lcm(period, r.stride * dst.period.size());
      start = std::max(start, r.offset + r.stride * (dst.prefix.size() + 1));
    }
    period = std::lcm(period, coverage);

    auto covering = [&](std::size_t j) -> std::optional<bool> {
      for (std::size_t i : readers) {
        const auto& r = k.rules()[i];
        if (j < r.offset || (j - r.offset) % r.stride != 0) continue;
        return t.streams()[i].at(r.divisor * ((j - r.offset) / r.stride)) != r.negate;
      }
      return std::nullopt;
    };
    for (std::size_t j = max_offset; j < max_offset + coverage; ++j) {
      if (!covering(j)) return std::nullopt;
    }
    for (std::size_t j = 0; j < start + period; ++j) {
      auto bit = covering(j);
      if (!bit) free_bits.push_back(Address{c, j});
      (j < start ? prefixes[c] : periods[c]).push_back(bit.value_or(false));
    }
  }
  if (free_bits.size() > max_free_bits) return std::nullopt;

  std::vector<Tape> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << free_bits.size()); ++mask) {
    for (std::size_t f = 0; f < free_bits.size(); ++f) {
      const auto& a = free_bits[f];
      prefixes[a.component][a.index] = (mask >> f) & 1;
    }
    std::vector<Stream> streams;
    for (std::size_t c = 0; c < k.src_arity(); ++c) streams.push_back(Stream{prefixes[c], periods[c]});
    Tape candidate(std::move(streams));
    // Covered bits are forced, so one mismatch means no preimage at all.
    if (apply_tapemap(k, candidate) != t) return std::vector<Tape>{};
    out.push_back(std::move(candidate));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tapekit
