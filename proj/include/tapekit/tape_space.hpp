#pragma once

// Tape spaces of bit streams: eventually-periodic tapes, finite bit-pattern
// events, per-bit product measures and structured tape maps.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapekit/rational.hpp"

namespace tapekit {

/// Raised for inputs outside an operation's contract (bad arity, bad literal).
class TapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is well-formed but not supported by the finite
/// representation (e.g. pushforward along a non-injective map).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Address {
  std::size_t component = 0;
  std::size_t index = 0;

  auto operator<=>(const Address&) const = default;
};

std::string to_string(const Address& a);

class TapeSpace {
 public:
  explicit TapeSpace(std::size_t arity) : arity_(arity) {
    if (arity == 0) throw TapeError("tape space arity must be at least 1");
  }
  std::size_t arity() const { return arity_; }
  bool contains(const Address& a) const { return a.component < arity_; }

  bool operator==(const TapeSpace&) const = default;

 private:
  std::size_t arity_;
};

/// One bit stream, stored in canonical form: the periodic tail is a primitive
/// word and the prefix is as short as possible. Two streams denote the same
/// infinite word iff they compare equal.
struct Stream {
  std::vector<bool> prefix;
  std::vector<bool> period;

  bool at(std::size_t n) const {
    return n < prefix.size() ? prefix[n] : period[(n - prefix.size()) % period.size()];
  }
  auto operator<=>(const Stream&) const = default;
};

/// An eventually-periodic point of the tape space R^(k).
class Tape {
 public:
  /// Canonicalizes every stream. Throws TapeError on an empty period or no streams.
  explicit Tape(std::vector<Stream> streams);

  static Tape constant(std::size_t arity, bool bit);
  /// Stream with the given prefix followed by a constant tail.
  static Tape from_prefix(const std::vector<bool>& prefix, bool tail = false);

  /// Literal syntax `<prefix>:<tail>` per component, components joined by '|'.
  /// The tail is `0`, `1` or `(<word>)*`.
  static Tape parse(std::string_view literal);
  std::string to_string() const;

  std::size_t arity() const { return streams_.size(); }
  const std::vector<Stream>& streams() const { return streams_; }
  bool read(const Address& a) const;

  auto operator<=>(const Tape&) const = default;

 private:
  std::vector<Stream> streams_;
};

bool tape_read(const Tape& t, const Address& a);

/// A finite conjunction of single-bit constraints; denotes a finite union of
/// cylinders. The empty pattern denotes the whole space.
class BitPattern {
 public:
  BitPattern() = default;
  BitPattern(std::initializer_list<std::pair<const Address, bool>> init) : bits_(init) {}

  /// Returns false (and leaves the pattern unchanged) if `a` is already
  /// constrained to the opposite bit.
  bool constrain(const Address& a, bool bit);
  std::optional<bool> lookup(const Address& a) const;
  bool matches(const Tape& t) const;
  bool compatible(const BitPattern& other) const;
  /// Conjunction; nullopt when the two patterns conflict.
  std::optional<BitPattern> intersect(const BitPattern& other) const;
  /// True iff every constraint of `other` is also a constraint here.
  bool refines(const BitPattern& other) const;

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  const std::map<Address, bool>& constraints() const { return bits_; }
  std::size_t max_component() const;

  std::string to_string() const;
  auto operator<=>(const BitPattern&) const = default;

 private:
  std::map<Address, bool> bits_;
};

/// Product of independent Bernoulli bits. The bias is the probability that a
/// bit is 1: an explicit override if present, else the component default if
/// present, else the global default.
class ProductMeasure {
 public:
  ProductMeasure() = default;
  explicit ProductMeasure(Rational default_bias);
  static ProductMeasure fair() { return ProductMeasure(rational(1, 2)); }

  ProductMeasure& set_component_default(std::size_t component, Rational bias);
  ProductMeasure& set_override(const Address& a, Rational bias);

  Rational bias(const Address& a) const;
  const Rational& default_bias() const { return default_bias_; }
  const std::map<std::size_t, Rational>& component_defaults() const { return component_defaults_; }
  const std::map<Address, Rational>& overrides() const { return overrides_; }

  /// Every bias lies strictly inside (0,1).
  bool nondegenerate() const;
  /// The measure seen by a single component, as an arity-1 measure.
  ProductMeasure marginal(std::size_t component) const;

  bool operator==(const ProductMeasure&) const = default;

 private:
  Rational default_bias_ = rational(1, 2);
  std::map<std::size_t, Rational> component_defaults_;
  std::map<Address, Rational> overrides_;
};

Rational pattern_measure(const ProductMeasure& m, const BitPattern& p);

/// Where one destination component reads from:
///   dst (i, n)  <-  src (source_component, stride * floor(n / divisor) + offset)
/// with the bit negated when `negate` is set.
struct AddressRule {
  std::size_t source_component = 0;
  std::size_t stride = 1;
  std::size_t divisor = 1;
  std::size_t offset = 0;
  bool negate = false;

  std::size_t source_index(std::size_t n) const { return stride * (n / divisor) + offset; }
  bool operator==(const AddressRule&) const = default;
};

/// A measurable map kappa from the source tape space to the destination tape
/// space, given by per-destination-component address rules. Applying it to a
/// source tape r yields the destination tape kappa(r).
class TapeMapSpec {
 public:
  TapeMapSpec(std::size_t src_arity, std::size_t dst_arity, std::vector<AddressRule> rules,
              std::string name);

  static TapeMapSpec identity(std::size_t arity = 1);
  static TapeMapSpec flip(std::size_t arity = 1);
  static TapeMapSpec drop(std::size_t k);
  static TapeMapSpec split(std::size_t k);
  static TapeMapSpec block(std::size_t b);
  /// R^(arity) -> R, keeping one component.
  static TapeMapSpec projection(std::size_t arity, std::size_t component);

  /// Resolves `identity`, `flip`, `drop:<k>`, `split:<k>`, `block:<b>`,
  /// `proj:<arity>:<component>`. Throws TapeError on unknown names.
  static TapeMapSpec from_name(std::string_view name);

  /// `first` then `second`: the map r |-> second(first(r)). Requires the
  /// first map's rules to have divisor 1.
  static TapeMapSpec compose(const TapeMapSpec& first, const TapeMapSpec& second);

  std::size_t src_arity() const { return src_arity_; }
  std::size_t dst_arity() const { return dst_arity_; }
  const std::vector<AddressRule>& rules() const { return rules_; }
  const std::string& name() const { return name_; }

  Address source_of(const Address& dst) const;
  bool negates(const Address& dst) const { return rules_.at(dst.component).negate; }
  bool injective() const;

  bool operator==(const TapeMapSpec& o) const {
    return src_arity_ == o.src_arity_ && dst_arity_ == o.dst_arity_ && rules_ == o.rules_;
  }

 private:
  std::size_t src_arity_;
  std::size_t dst_arity_;
  std::vector<AddressRule> rules_;
  std::string name_;
};

Tape apply_tapemap(const TapeMapSpec& k, const Tape& t);

/// kappa^{-1}(p). nullopt denotes the empty event (conflicting source
/// constraints).
std::optional<BitPattern> preimage_pattern(const TapeMapSpec& k, const BitPattern& p);

/// kappa_* m. Throws UnsupportedError when the address map is not injective.
ProductMeasure pushforward_measure(const TapeMapSpec& k, const ProductMeasure& m);

/// All source tapes r with kappa(r) = t, when that set is finite and
/// eventually periodic; nullopt when the preimage is infinite (some source
/// address is unconstrained). An empty vector means no tape maps to t.
std::optional<std::vector<Tape>> tape_preimage(const TapeMapSpec& k, const Tape& t,
                                               std::size_t max_free_bits = 12);

}  // namespace tapekit
