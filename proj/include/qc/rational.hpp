// SPDX-License-Identifier: MIT
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// floor(a/b) for b > 0; rounds toward minus infinity, also for negative a.
[[nodiscard]] Int floor_div(const Int& a, const Int& b);

// Largest integer <= x.
[[nodiscard]] Int floor_rat(const Rat& x);

// Smallest integer >= x.
[[nodiscard]] Int ceil_rat(const Rat& x);

// x - mu*floor(x/mu) for mu > 0; result lies in [0, mu).
[[nodiscard]] Rat mod_rat(const Rat& x, const Rat& mu);

// Canonical text form: "p" when the denominator is 1, else "p/q" with q > 0
// and gcd(p, q) = 1.
[[nodiscard]] std::string rat_to_string(const Rat& x);

// Parses "p" or "p/q" (optional leading minus on p). Throws
// std::invalid_argument on malformed input or zero denominator.
[[nodiscard]] Rat rat_from_string(const std::string& s);

}  // namespace qc
