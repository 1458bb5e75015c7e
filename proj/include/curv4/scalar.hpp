#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>

namespace curv4 {

/// Exact rational scalar used by the golden-value ("rational") precision mode.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

namespace tol {
inline constexpr double kAbs = 1e-10;
inline constexpr double kRel = 1e-10;
inline constexpr double kEq = 1e-9;
}  // namespace tol

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double tol_abs() { return tol::kAbs; }
  static double tol_eq() { return tol::kEq; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational tol_abs() { return Rational(0); }
  static Rational tol_eq() { return Rational(0); }
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline std::string to_exact_string(const Rational& x) { return x.str(); }

/// Parses a decimal literal ("0.25", "-3", "1e-3") or a fraction ("1/3")
/// without passing through binary floating point.
Rational parse_rational(const std::string& text);

}  // namespace curv4
