#pragma once

#include "curv4/lambda2.hpp"
#include "curv4/surd.hpp"

#include <array>
#include <optional>

namespace curv4 {

/// Ascending eigenvalues w1 ≤ w2 ≤ w3 of a symmetric 3x3 block.
template <class T>
struct Spectrum3 {
  T w1{}, w2{}, w3{};

  /// Throws InvalidArgument unless w1 ≤ w2 ≤ w3.
  static Spectrum3 ordered(const T& a, const T& b, const T& c);
  /// Sorts the three values.
  static Spectrum3 sorted(T a, T b, T c);

  T sum() const { return w1 + w2 + w3; }
  T sum_sq() const { return w1 * w1 + w2 * w2 + w3 * w3; }
  T product() const { return w1 * w2 * w3; }
};

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
struct Eigensystem3 {
  std::array<double, 3> values{};
  std::array<std::array<double, 3>, 3> vectors{};  // vectors[r][c]: component r of vector c
};

/// Closed-form trigonometric solution of the characteristic cubic.  When the
/// normalized discriminant 1 - r² drops below 1e-14 the two-distinct-root
/// formulas are used instead of acos.
Eigensystem3 eigensystem3(const std::array<std::array<double, 3>, 3>& m);

/// Throws TraceNotZero when a weyl-kind block's spectrum does not sum to zero.
Spectrum3<double> spectrum3(const Block3<double>& block);

/// Exact spectrum of a rational block, available whenever the characteristic
/// polynomial has a rational root (the other two then lie in Q(√D)).
std::optional<Spectrum3<Surd>> exact_spectrum(const Block3<Rational>& block);

extern template struct Spectrum3<double>;
extern template struct Spectrum3<Surd>;

}  // namespace curv4
