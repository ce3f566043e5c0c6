#pragma once

// Brute-force oracles shared by the test suites. They use only eval and
// tape_read, never trace trees, so they are independent of the symbolic
// machinery under test.

#include <functional>
#include <map>
#include <vector>

#include "tapekit/eval.hpp"
#include "tapekit/truth.hpp"

namespace tapekit::testing {

/// Every tape of the given arity whose components are `depth`-bit words
/// followed by a zero tail, together with the constrained prefix as a pattern.
struct PrefixTape {
  Tape tape;
  BitPattern prefix;
};

inline std::vector<PrefixTape> prefix_tapes(std::size_t arity, std::size_t depth) {
  std::vector<PrefixTape> out;
  const std::size_t bits = arity * depth;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << bits); ++w) {
    std::vector<Stream> streams(arity);
    BitPattern p;
    for (std::size_t c = 0; c < arity; ++c) {
      streams[c].period = {false};
      for (std::size_t i = 0; i < depth; ++i) {
        const bool b = ((w >> (c * depth + i)) & 1U) != 0;
        streams[c].prefix.push_back(b);
        p.constrain(Address{c, i}, b);
      }
    }
    out.push_back(PrefixTape{Tape(std::move(streams)), std::move(p)});
  }
  return out;
}

/// Product weight of a prefix, computed bit by bit.
inline Rational prefix_weight(const ProductMeasure& m, const BitPattern& p) {
  Rational w = 1;
  for (const auto& [a, b] : p.constraints()) w *= b ? m.bias(a) : 1 - m.bias(a);
  return w;
}

/// Law of `c` by evaluating on every depth-`depth` zero-tail tape. Valid when
/// no run reads past the prefix.
inline std::map<std::optional<std::string>, Rational> oracle_law(const Code& c, std::size_t arity,
                                                                 std::size_t depth, std::size_t fuel,
                                                                 const ProductMeasure& m) {
  std::map<std::optional<std::string>, Rational> out;
  for (const auto& pt : prefix_tapes(arity, depth)) {
    const Rational w = prefix_weight(m, pt.prefix);
    if (w != 0) out[eval(c, pt.tape, fuel).label()] += w;
  }
  return out;
}

}  // namespace tapekit::testing
