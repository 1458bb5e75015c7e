#include "curv4/eigen3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace curv4 {

template <class T>
Spectrum3<T> Spectrum3<T>::ordered(const T& a, const T& b, const T& c) {
  if (b < a || c < b) throw Error(ErrorCode::InvalidArgument, "spectrum must be ascending");
  return Spectrum3{a, b, c};
}

template <class T>
Spectrum3<T> Spectrum3<T>::sorted(T a, T b, T c) {
  if (b < a) std::swap(a, b);
  if (c < b) std::swap(b, c);
  if (b < a) std::swap(a, b);
  return Spectrum3{a, b, c};
}

template struct Spectrum3<double>;
template struct Spectrum3<Surd>;

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// Unit vector spanning the kernel of (m − λI), assumed one-dimensional: the
// largest cross product of two rows.
Vec3 kernel_vector(const Mat3& m, double lambda) {
  Mat3 a = m;
  for (std::size_t i = 0; i < 3; ++i) a[i][i] -= lambda;
  const std::array<Vec3, 3> c{cross(a[0], a[1]), cross(a[0], a[2]), cross(a[1], a[2])};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (dot(c[i], c[i]) > dot(c[best], c[best])) best = i;
  const double n = std::sqrt(dot(c[best], c[best]));
  if (n == 0.0) return {1.0, 0.0, 0.0};
  return scaled(c[best], 1.0 / n);
}

// Any unit vector orthogonal to u.
Vec3 orthogonal_to(const Vec3& u) {
  const Vec3 axis = std::fabs(u[0]) > std::fabs(u[1]) ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
  Vec3 v = cross(u, axis);
  return scaled(v, 1.0 / std::sqrt(dot(v, v)));
}

}  // namespace

Eigensystem3 eigensystem3(const Mat3& m) {
  Eigensystem3 out;
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  const double off = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  const double p2 = ((m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                     (m[2][2] - q) * (m[2][2] - q) + 2.0 * off) / 6.0;
  const double p = std::sqrt(p2);

  const double scale = std::max({std::fabs(m[0][0]), std::fabs(m[1][1]), std::fabs(m[2][2]),
                                 std::sqrt(off), 1e-300});
  if (p <= 1e-15 * scale) {
    out.values = {q, q, q};
    out.vectors = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    return out;
  }

  Mat3 b = m;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) b[i][j] /= p;
    b[i][i] -= q / p;
  }
  const double det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                       b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                       b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);

  // Index of the eigenvalue that is simple even at the repeated-root boundary.
  std::size_t simple = 0;
  if (1.0 - r * r < 1e-14) {
    // Two-distinct-root boundary: r = +1 gives (q−p, q−p, q+2p), r = −1 gives
    // (q−2p, q+p, q+p).
    if (r > 0) {
      out.values = {q - p, q - p, q + 2.0 * p};
      simple = 2;
    } else {
      out.values = {q - 2.0 * p, q + p, q + p};
      simple = 0;
    }
  } else {
    const double phi = std::acos(r) / 3.0;
    const double largest = q + 2.0 * p * std::cos(phi);
    const double smallest = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double middle = 3.0 * q - largest - smallest;
    out.values = {smallest, middle, largest};
    // the extreme eigenvalue farther from the middle one is best separated
    simple = (largest - middle) >= (middle - smallest) ? 2 : 0;
  }

  const Vec3 u = kernel_vector(m, out.values[simple]);
  // Restrict m to the plane orthogonal to u and diagonalize the 2x2 block.
  const Vec3 e1 = orthogonal_to(u);
  const Vec3 e2 = cross(u, e1);
  auto apply = [&](const Vec3& v) {
    return Vec3{dot(m[0], v), dot(m[1], v), dot(m[2], v)};
  };
  const double a11 = dot(e1, apply(e1)), a12 = dot(e1, apply(e2)), a22 = dot(e2, apply(e2));
  const double theta = 0.5 * std::atan2(2.0 * a12, a11 - a22);
  const double c = std::cos(theta), s = std::sin(theta);
  Vec3 v1{c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]};
  Vec3 v2{-s * e1[0] + c * e2[0], -s * e1[1] + c * e2[1], -s * e1[2] + c * e2[2]};
  double l1 = dot(v1, apply(v1));
  double l2 = dot(v2, apply(v2));
  if (l1 > l2) {
    std::swap(l1, l2);
    std::swap(v1, v2);
  }
  std::array<Vec3, 3> vecs;
  if (simple == 2) {
    vecs = {v1, v2, u};
  } else {
    vecs = {u, v1, v2};
  }
  for (std::size_t col = 0; col < 3; ++col)
    for (std::size_t row = 0; row < 3; ++row) out.vectors[row][col] = vecs[col][row];
  return out;
}

Spectrum3<double> spectrum3(const Block3<double>& block) {
  const Eigensystem3 es = eigensystem3(block.matrix());
  auto s = Spectrum3<double>::sorted(es.values[0], es.values[1], es.values[2]);
  if (block.kind() == BlockKind::weyl && std::fabs(s.sum()) > tol::kAbs)
    throw Error(ErrorCode::TraceNotZero, "Weyl spectrum does not sum to zero");
  return s;
}

namespace {

// Best rational approximation with bounded denominator (continued fractions).
Rational rationalize(double x, long max_den) {
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(y);
    if (std::fabs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
  }
  return Rational(h1, k1);
}

}  // namespace

std::optional<Spectrum3<Surd>> exact_spectrum(const Block3<Rational>& block) {
  const auto& m = block.matrix();
  if (block.is_diagonal())
    return Spectrum3<Surd>::sorted(Surd(m[0][0]), Surd(m[1][1]), Surd(m[2][2]));

  // λ³ + c2 λ² + c1 λ + c0
  const Rational c2 = -block.trace();
  const Rational c1 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                      m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const Rational c0 = -block.determinant();
  auto poly = [&](const Rational& x) { return ((x + c2) * x + c1) * x + c0; };

  std::array<std::array<double, 3>, 3> md;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) md[i][j] = to_double(m[i][j]);
  const Eigensystem3 approx = eigensystem3(md);

  for (double guess : approx.values) {
    for (long max_den : {1000L, 1000000L, 1000000000L}) {
      const Rational root = rationalize(guess, max_den);
      if (poly(root) != 0) continue;
      // deflate: λ² + b λ + c
      const Rational b = c2 + root;
      const Rational c = c1 + root * b;
      const Rational disc = b * b - 4 * c;
      if (disc < 0) return std::nullopt;
      const Surd sq = Surd::sqrt_of(disc);
      const Surd lo = (Surd(Rational(-b)) - sq) / Rational(2);
      const Surd hi = (Surd(Rational(-b)) + sq) / Rational(2);
      return Spectrum3<Surd>::sorted(Surd(root), lo, hi);
    }
  }
  return std::nullopt;
}

}  // namespace curv4
