#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tapekit {

/// Exact rational number. All probabilities and truth levels use this type.
using Rational = mpq_class;

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; integers print as "num/1" only when
/// `always_fraction` is set, otherwise as "num".
std::string to_string(const Rational& q, bool always_fraction = false);

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// 2^-n
Rational dyadic(unsigned n);

inline bool in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }
inline bool in_open_unit_interval(const Rational& q) { return q > 0 && q < 1; }

}  // namespace tapekit
