// SPDX-License-Identifier: MIT
#include "qc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace qc {

Int floor_div(const Int& a, const Int& b) {
  if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
  Int q = a / b;  // truncates toward zero
  if (a % b != 0 && a < 0) --q;
  return q;
}

Int floor_rat(const Rat& x) {
  return floor_div(numerator(x), denominator(x));
}

Int ceil_rat(const Rat& x) {
  return -floor_rat(-x);
}

Rat mod_rat(const Rat& x, const Rat& mu) {
  if (mu <= 0) throw std::invalid_argument("mod_rat: modulus must be positive");
  return x - mu * Rat(floor_rat(x / mu));
}

std::string rat_to_string(const Rat& x) {
  const Int num = numerator(x);
  const Int den = denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool parse_int(const std::string& s, std::size_t begin, std::size_t end, Int& out) {
  if (begin >= end) return false;
  std::size_t i = begin;
  if (s[i] == '-') ++i;
  if (i >= end) return false;
  for (std::size_t j = i; j < end; ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  out = Int(s.substr(begin, end - begin));
  return true;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  const std::size_t slash = s.find('/');
  Int num, den;
  if (slash == std::string::npos) {
    if (!parse_int(s, 0, s.size(), num)) {
      throw std::invalid_argument("bad rational: '" + s + "'");
    }
    return Rat(num);
  }
  if (!parse_int(s, 0, slash, num) || !parse_int(s, slash + 1, s.size(), den)) {
    throw std::invalid_argument("bad rational: '" + s + "'");
  }
  if (den == 0) throw std::invalid_argument("bad rational (zero denominator): '" + s + "'");
  return Rat(num, den);  // normalizes sign and gcd
}

}  // namespace qc
