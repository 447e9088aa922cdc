#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace zzsg {

/// Exact rational scalar used everywhere in the symbolic kernel.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rat(long long p, long long q = 1) { return Rational(p) / Rational(q); }

}  // namespace zzsg
