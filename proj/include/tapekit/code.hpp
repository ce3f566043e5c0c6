#pragma once

// The combinator language: codes, outcomes, S-expression syntax and bracket
// abstraction.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapekit/tape_space.hpp"

namespace tapekit {

class SyntaxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Prim : std::uint8_t {
  S,
  K,
  I,
  Succ,
  Pred,
  IfZero,
  Pair,
  Fst,
  Snd,
  IfBit,
  Fix,
  Read,
  Remap,
};

/// Immutable, structurally shared code term.
///
/// `Read` and `Remap` primitives carry a list of tape maps, innermost first.
/// A `Read` with maps [k1, k2] reads address a as k2.source_of(k1.source_of(a)),
/// negated once per negating map along the way. A `Remap` with maps C,
/// applied to a body, normalizes the body with C in scope: every read made
/// while that body runs goes through C and then through the enclosing scopes.
class Code {
 public:
  enum class Kind : std::uint8_t { Prim, App, Nat, Bit, Con, Var };

  static Code prim(Prim p);
  static Code S() { return prim(Prim::S); }
  static Code K() { return prim(Prim::K); }
  static Code I() { return prim(Prim::I); }
  static Code read_op(std::vector<TapeMapSpec> frames = {});
  static Code remap_op(std::vector<TapeMapSpec> chain);
  static Code app(Code f, Code a);
  static Code apps(Code f, std::initializer_list<Code> args);
  static Code nat(std::uint64_t n);
  static Code bit(bool b);
  static Code con(std::string name);
  static Code var(std::string name);

  /// (read c i) on the plain tape.
  static Code read(Code component, Code index);
  static Code read(std::size_t component, std::size_t index) { return read(nat(component), nat(index)); }
  /// (remap k body)
  static Code remap(const TapeMapSpec& k, Code body);

  Kind kind() const;
  Prim prim() const;
  const Code& fn() const;
  const Code& arg() const;
  std::uint64_t nat_value() const;
  bool bit_value() const;
  const std::string& name() const;
  /// Frames of a Read primitive or chain of a Remap primitive.
  const std::vector<TapeMapSpec>& maps() const;

  bool is_prim(Prim p) const { return kind() == Kind::Prim && prim() == p; }
  bool has_free_var(std::string_view name) const;
  /// True when a Read or Remap primitive occurs in the term.
  bool touches_tape() const;
  std::vector<std::string> free_vars() const;
  std::size_t size() const;

  /// Parseable S-expression. Constants print bare (`H`), bits as `#0`/`#1`.
  std::string to_sexpr() const;
  /// Label used for outcomes in laws and reports; same as to_sexpr().
  std::string label() const { return to_sexpr(); }

  friend bool operator==(const Code& a, const Code& b);
  friend std::strong_ordering operator<=>(const Code& a, const Code& b);

 private:
  struct Node;
  explicit Code(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses one code in S-expression syntax, abstracting `lam` binders. Throws
/// SyntaxError, including when the result has a free variable.
Code parse_code(std::string_view text);
/// As parse_code but allows free variables in the result.
Code parse_open_code(std::string_view text);

/// Eliminates `var` from `body` with S/K/I (plus eta). Throws SyntaxError if
/// `body` has a free variable other than `var`.
Code bracket_abstract(const std::string& var, const Code& body);

enum class BottomReason : std::uint8_t { FuelExhausted, Stuck };

std::string to_string(BottomReason r);

/// A proper value in weak normal form, or the divergence value.
class Outcome {
 public:
  static Outcome value(Code c) { return Outcome(std::move(c), BottomReason::Stuck); }
  static Outcome bottom(BottomReason r) { return Outcome(std::nullopt, r); }

  bool is_value() const { return value_.has_value(); }
  bool is_bottom() const { return !value_.has_value(); }
  const Code& code() const { return value_.value(); }
  BottomReason reason() const { return reason_; }
  /// Label of the value, or nullopt for bottom.
  std::optional<std::string> label() const;
  std::string to_string() const;

  bool operator==(const Outcome& o) const {
    return is_value() ? (o.is_value() && *value_ == *o.value_) : (o.is_bottom() && reason_ == o.reason_);
  }

 private:
  Outcome(std::optional<Code> v, BottomReason r) : value_(std::move(v)), reason_(r) {}
  std::optional<Code> value_;
  BottomReason reason_;
};

}  // namespace tapekit
