#pragma once

#include "curv4/tensor.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace curv4 {

enum class Duality { self_dual, anti_self_dual };
enum class BlockKind { weyl, kn_product, generic };

std::string_view to_string(Duality d);

/// Integer component matrix of a 2-form, ω_ij = -ω_ji.
using Bivector = std::array<std::array<int, 4>, 4>;

/// e^p ∧ e^q, components δ^{pq}_{ij}.
Bivector wedge(int p, int q);
Bivector operator+(const Bivector& a, const Bivector& b);
Bivector operator-(const Bivector& a, const Bivector& b);
Bivector operator-(const Bivector& a);

/// Hodge star on 2-forms, (*α)_ij = ½ ε_ijkl α_kl with ε_0123 = orientation.
Bivector hodge_star(const Bivector& a, int orientation);

/// ⟨α,β⟩ = ½ α_ij β_ij; the standard basis vectors have ⟨ω,ω⟩ = 2.
int bivector_inner(const Bivector& a, const Bivector& b);

/// Six bivectors in the order (ω₁⁺, ω₂⁺, ω₃⁺, ω₁⁻, ω₂⁻, ω₃⁻).
class Lambda2Basis {
 public:
  /// e¹∧e²±e³∧e⁴, e¹∧e³±e⁴∧e², e¹∧e⁴±e²∧e³ for orientation +1.  Orientation -1
  /// swaps the two triples, which spans the same eigenspaces as negating e⁴.
  static Lambda2Basis standard(int orientation = 1);
  /// Arbitrary bivectors; orthogonality is checked when the basis is used.
  static Lambda2Basis from_bivectors(const std::array<Bivector, 6>& v, int orientation = 1);

  const Bivector& operator[](int a) const { return v_[static_cast<std::size_t>(a)]; }
  int orientation() const { return orientation_; }

  std::array<std::array<int, 6>, 6> gram() const;
  bool is_orthogonal() const;

  struct Entry {
    int i, j, value;
  };
  /// Non-zero components of basis vector a.
  const std::vector<Entry>& support(int a) const { return support_[static_cast<std::size_t>(a)]; }

 private:
  Lambda2Basis(const std::array<Bivector, 6>& v, int orientation);

  std::array<Bivector, 6> v_{};
  std::array<std::vector<Entry>, 6> support_;
  int orientation_ = 1;
};

/// Standard basis for an orthonormal frame; throws NotOrthonormalFrame unless
/// `metric` is the identity.
template <class T>
Lambda2Basis hodge_projectors(const SymBilinear4<T>& metric, int orientation);

/// Symmetric 3x3 block of a Λ²-operator, tagged with the half of Λ² it acts on.
template <class T>
class Block3 {
 public:
  using Matrix = std::array<std::array<T, 3>, 3>;

  Block3() : Block3(Matrix{}, Duality::self_dual, BlockKind::generic) {}
  /// Throws NonSymmetricInput if m is not symmetric, TraceNotZero for a
  /// weyl-kind block with non-vanishing trace.
  Block3(const Matrix& m, Duality duality, BlockKind kind);

  const T& operator()(int i, int j) const {
    return m_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const Matrix& matrix() const { return m_; }
  Duality duality() const { return duality_; }
  BlockKind kind() const { return kind_; }

  T trace() const { return m_[0][0] + m_[1][1] + m_[2][2]; }
  T frobenius_sq() const;
  T determinant() const;
  bool is_diagonal() const;

 private:
  Matrix m_{};
  Duality duality_;
  BlockKind kind_;
};

/// Symmetric 6x6 matrix of a curvature-type operator in a Lambda2Basis.
template <class T>
class Lambda2Operator {
 public:
  using Matrix = std::array<std::array<T, 6>, 6>;

  Lambda2Operator() {
    for (auto& row : m_) row.fill(T(0));
  }
  explicit Lambda2Operator(const Matrix& m);

  const T& operator()(int a, int b) const {
    return m_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  const Matrix& matrix() const { return m_; }

  T trace() const;
  T frobenius_sq() const;
  /// Diagonal Λ±→Λ± block.
  Block3<T> block(Duality d, BlockKind kind = BlockKind::generic) const;
  /// Off-diagonal block, rows indexed by Λ⁺ and columns by Λ⁻.
  std::array<std::array<T, 3>, 3> off_diagonal() const;

 private:
  Matrix m_{};
};

extern template class Block3<double>;
extern template class Block3<Rational>;
extern template class Lambda2Operator<double>;
extern template class Lambda2Operator<Rational>;

}  // namespace curv4
