#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace permlocal {

using BigInt = boost::multiprecision::cpp_int;

// Natural log of a positive big integer (double precision).
inline double log_big(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = msb(x);  // index of highest set bit
  if (bits <= 960) return std::log(x.convert_to<double>());
  const BigInt top = x >> (bits - 960);
  return std::log(top.convert_to<double>()) + (double)(bits - 960) * std::log(2.0);
}

// num/den as a double, safe for operands far beyond double range.
// Assumes num >= 0, den > 0.
inline double ratio_big(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("ratio_big: zero denominator");
  if (num == 0) return 0.0;
  const long long shift = 64 - ((long long)msb(num) - (long long)msb(den));
  const BigInt scaled = shift >= 0 ? BigInt(num << shift) : BigInt(num >> -shift);
  const BigInt q = scaled / den;
  return std::ldexp(q.convert_to<double>(), (int)-shift);
}

inline std::string to_decimal(const BigInt& x) { return x.str(); }

}  // namespace permlocal
