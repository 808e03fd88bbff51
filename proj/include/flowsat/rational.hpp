#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace flowsat {

using Rational = boost::multiprecision::mpq_rational;

/// Arithmetic policy for the simplex and the decoders. Exact scalars use no
/// tolerances at all.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
  static std::string to_string(double v) { return std::to_string(v); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(std::int64_t v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static bool is_zero(const Rational& v) { return v.is_zero(); }
  static std::string to_string(const Rational& v) { return v.str(); }
};

template <class T>
T abs_value(const T& v) {
  return v < 0 ? T(-v) : v;
}

}  // namespace flowsat
