#pragma once

#include "curv4/scalar.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace curv4 {

/// Exact element of Q(√2, √3, √5, ...): a finite sum Σ q_m √m over distinct
/// square-free radicands m ≥ 1.  Square roots of distinct square-free
/// integers are linearly independent over Q, so the canonical form makes the
/// zero test exact; the sign of a non-zero value is resolved in 100-digit
/// floating point.
class Surd {
 public:
  Surd() = default;
  Surd(const Rational& q);  // NOLINT(google-explicit-constructor)
  Surd(long q) : Surd(Rational(q)) {}  // NOLINT(google-explicit-constructor)
  Surd(int q) : Surd(Rational(q)) {}   // NOLINT(google-explicit-constructor)

  /// √q for a non-negative rational q.  Throws InexactValue if the radicand is
  /// too large to reduce to square-free form.
  static Surd sqrt_of(const Rational& q);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  /// Rational part; throws InexactValue unless is_rational().
  Rational rational_value() const;
  int sign() const;
  double to_double() const;
  std::string str() const;

  Surd operator-() const;
  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  Surd& operator*=(const Surd& o);
  Surd& operator/=(const Rational& q);

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  friend Surd operator/(Surd a, const Rational& q) { return a /= q; }

  friend bool operator==(const Surd& a, const Surd& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Surd& a, const Surd& b) { return (a - b).sign() < 0; }
  friend bool operator<=(const Surd& a, const Surd& b) { return (a - b).sign() <= 0; }
  friend bool operator>(const Surd& a, const Surd& b) { return b < a; }
  friend bool operator>=(const Surd& a, const Surd& b) { return b <= a; }

 private:
  void add_term(std::uint64_t radicand, const Rational& coeff);

  std::map<std::uint64_t, Rational> terms_;
};

/// √x; x must be rational-valued.
Surd sqrt(const Surd& x);
Surd abs(const Surd& x);
inline double to_double(const Surd& x) { return x.to_double(); }
inline std::string to_exact_string(const Surd& x) { return x.str(); }

}  // namespace curv4
