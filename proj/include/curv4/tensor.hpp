#pragma once

#include "curv4/error.hpp"
#include "curv4/scalar.hpp"

#include <array>
#include <cstddef>
#include <string_view>

namespace curv4 {

using Matrix4Array = std::array<std::array<double, 4>, 4>;

enum class Role { metric, ricci, traceless_ricci, schouten, hessian, generic };

std::string_view to_string(Role role);

/// Symmetric (0,2)-tensor on a 4-dimensional space.  Only the upper triangle is
/// stored, so symmetry holds by construction.
template <class T>
class SymBilinear4 {
 public:
  SymBilinear4() { upper_.fill(T(0)); }

  /// Builds from a full matrix; rejects asymmetric input and enforces the
  /// invariant attached to `role`.
  static SymBilinear4 from_matrix(const std::array<std::array<T, 4>, 4>& m,
                                  Role role = Role::generic);
  static SymBilinear4 diagonal(const std::array<T, 4>& d, Role role = Role::generic);
  static SymBilinear4 identity() { return diagonal({T(1), T(1), T(1), T(1)}, Role::metric); }

  const T& operator()(int i, int j) const { return upper_[slot(i, j)]; }
  void set(int i, int j, const T& v) { upper_[slot(i, j)] = v; }

  Role role() const { return role_; }
  /// Re-tags the tensor, checking the new role's invariant.
  SymBilinear4 with_role(Role role) const;

  T trace() const { return upper_[0] + upper_[4] + upper_[7] + upper_[9]; }
  /// Sum of squared components, Σ_ij a_ij².
  T norm_sq() const;
  /// Matrix square (A²)_ik = A_ip A_kp.
  SymBilinear4 squared() const;
  bool is_identity() const;
  bool is_positive_definite() const;

  SymBilinear4& operator+=(const SymBilinear4& o);
  SymBilinear4& operator-=(const SymBilinear4& o);
  SymBilinear4& operator*=(const T& s);
  friend SymBilinear4 operator+(SymBilinear4 a, const SymBilinear4& b) { return a += b; }
  friend SymBilinear4 operator-(SymBilinear4 a, const SymBilinear4& b) { return a -= b; }
  friend SymBilinear4 operator*(const T& s, SymBilinear4 a) { return a *= s; }

  static constexpr std::size_t slot(int i, int j) {
    if (i > j) std::swap(i, j);
    // row offsets of the packed upper triangle: 0, 4, 7, 9
    constexpr std::array<std::size_t, 4> offset{0, 4, 7, 9};
    return offset[static_cast<std::size_t>(i)] + static_cast<std::size_t>(j - i);
  }

 private:
  void check_role() const;

  std::array<T, 10> upper_{};
  Role role_ = Role::generic;
};

/// Algebraic curvature tensor R_ijkl in an orthonormal frame, together with
/// the orientation (+1 or -1) of that frame.
template <class T>
class AlgCurvTensor {
 public:
  using Components = std::array<T, 256>;

  AlgCurvTensor() { c_.fill(T(0)); }

  /// Wraps components without checking the curvature symmetries.
  static AlgCurvTensor raw(const Components& c, int orientation = 1);
  /// Wraps components and throws NonSymmetricInput when any symmetry residual
  /// exceeds the scalar type's absolute tolerance.
  static AlgCurvTensor from_components(const Components& c, int orientation = 1);

  static constexpr std::size_t index(int i, int j, int k, int l) {
    return static_cast<std::size_t>(((i * 4 + j) * 4 + k) * 4 + l);
  }

  const T& operator()(int i, int j, int k, int l) const { return c_[index(i, j, k, l)]; }
  T& at(int i, int j, int k, int l) { return c_[index(i, j, k, l)]; }
  const Components& components() const { return c_; }

  int orientation() const { return orientation_; }
  AlgCurvTensor with_orientation(int orientation) const;

  /// Largest violation among antisymmetry, pair symmetry and first Bianchi.
  T symmetry_residual() const;
  void validate() const;

  /// Componentwise Σ R_ijkl² over all 256 index tuples.
  T component_norm_sq() const;

  AlgCurvTensor& operator+=(const AlgCurvTensor& o);
  AlgCurvTensor& operator-=(const AlgCurvTensor& o);
  AlgCurvTensor& operator*=(const T& s);
  friend AlgCurvTensor operator+(AlgCurvTensor a, const AlgCurvTensor& b) { return a += b; }
  friend AlgCurvTensor operator-(AlgCurvTensor a, const AlgCurvTensor& b) { return a -= b; }
  friend AlgCurvTensor operator*(const T& s, AlgCurvTensor a) { return a *= s; }

 private:
  Components c_{};
  int orientation_ = 1;
};

extern template class SymBilinear4<double>;
extern template class SymBilinear4<Rational>;
extern template class AlgCurvTensor<double>;
extern template class AlgCurvTensor<Rational>;

}  // namespace curv4
