#include "curv4/surd.hpp"

#include "curv4/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <limits>
#include <numeric>
#include <sstream>

namespace curv4 {

namespace {

using boost::multiprecision::mpz_int;
using HighFloat = boost::multiprecision::cpp_bin_float_100;

constexpr std::uint64_t kTrialLimit = 2'000'000;

// n = s² · m with m square-free.
std::pair<mpz_int, std::uint64_t> split_square(mpz_int n) {
  mpz_int square_root = 1;
  mpz_int free_part = 1;
  for (std::uint64_t p = 2; p <= kTrialLimit; p += (p == 2 ? 1 : 2)) {
    const mpz_int pp = mpz_int(p) * p;
    if (pp > n) break;
    int count = 0;
    while (n % p == 0) {
      n /= p;
      ++count;
    }
    for (int c = 0; c + 1 < count; c += 2) square_root *= p;
    if (count % 2 == 1) free_part *= p;
  }
  if (n > 1) {
    const mpz_int limit = mpz_int(kTrialLimit) * kTrialLimit;
    const mpz_int r = boost::multiprecision::sqrt(n);
    if (r * r == n) {
      square_root *= r;
    } else if (n < limit) {
      free_part *= n;  // prime: every smaller factor was divided out
    } else {
      throw Error(ErrorCode::InexactValue, "radicand too large to reduce exactly");
    }
  }
  if (free_part > mpz_int(std::numeric_limits<std::uint64_t>::max()))
    throw Error(ErrorCode::InexactValue, "square-free radicand exceeds 64 bits");
  return {square_root, free_part.convert_to<std::uint64_t>()};
}

}  // namespace

Surd::Surd(const Rational& q) {
  if (q != 0) terms_.emplace(1, q);
}

Surd Surd::sqrt_of(const Rational& q) {
  if (q < 0) throw Error(ErrorCode::InvalidArgument, "square root of a negative number");
  Surd out;
  if (q == 0) return out;
  const mpz_int num = boost::multiprecision::numerator(q);
  const mpz_int den = boost::multiprecision::denominator(q);
  // √(n/d) = √(n·d) / d
  auto [root, free_part] = split_square(num * den);
  out.terms_.emplace(free_part, Rational(root, den));
  return out;
}

void Surd::add_term(std::uint64_t radicand, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(radicand, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Surd::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational Surd::rational_value() const {
  if (!is_rational()) throw Error(ErrorCode::InexactValue, "value is irrational: " + str());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

int Surd::sign() const {
  if (terms_.empty()) return 0;
  if (is_rational()) return terms_.begin()->second > 0 ? 1 : -1;
  HighFloat s = 0;
  for (const auto& [m, q] : terms_)
    s += HighFloat(boost::multiprecision::numerator(q)) /
         HighFloat(boost::multiprecision::denominator(q)) * boost::multiprecision::sqrt(HighFloat(m));
  return s > 0 ? 1 : (s < 0 ? -1 : 0);
}

double Surd::to_double() const {
  HighFloat s = 0;
  for (const auto& [m, q] : terms_)
    s += HighFloat(boost::multiprecision::numerator(q)) /
         HighFloat(boost::multiprecision::denominator(q)) * boost::multiprecision::sqrt(HighFloat(m));
  return s.convert_to<double>();
}

std::string Surd::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, q] : terms_) {
    Rational c = q;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    if (m == 1) {
      os << c.str();
    } else {
      if (c == -1) os << "-";
      else if (c != 1) os << c.str() << "*";
      os << "sqrt(" << m << ")";
    }
  }
  return os.str();
}

Surd Surd::operator-() const {
  Surd out = *this;
  for (auto& [m, q] : out.terms_) q = -q;
  return out;
}

Surd& Surd::operator+=(const Surd& o) {
  for (const auto& [m, q] : o.terms_) add_term(m, q);
  return *this;
}

Surd& Surd::operator-=(const Surd& o) {
  for (const auto& [m, q] : o.terms_) add_term(m, -q);
  return *this;
}

Surd& Surd::operator*=(const Surd& o) {
  Surd out;
  for (const auto& [a, qa] : terms_)
    for (const auto& [b, qb] : o.terms_) {
      // √a·√b = g·√((a/g)(b/g)) with g = gcd(a,b); the product stays square-free
      const std::uint64_t g = std::gcd(a, b);
      const std::uint64_t x = a / g, y = b / g;
      if (x != 0 && y > std::numeric_limits<std::uint64_t>::max() / x)
        throw Error(ErrorCode::InexactValue, "radicand product overflows 64 bits");
      out.add_term(x * y, qa * qb * Rational(g));
    }
  terms_ = std::move(out.terms_);
  return *this;
}

Surd& Surd::operator/=(const Rational& q) {
  if (q == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
  for (auto& [m, c] : terms_) c /= q;
  return *this;
}

Surd sqrt(const Surd& x) {
  if (!x.is_rational())
    throw Error(ErrorCode::InexactValue, "square root of an irrational surd: " + x.str());
  return Surd::sqrt_of(x.rational_value());
}

Surd abs(const Surd& x) { return x.sign() < 0 ? -x : x; }

}  // namespace curv4
