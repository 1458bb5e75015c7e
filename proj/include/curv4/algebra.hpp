#pragma once

// Pointwise curvature algebra in dimension four: the Weyl decomposition, the
// Kulkarni–Nomizu product and the block form of the curvature operator on
// Λ² = Λ⁺ ⊕ Λ⁻.
//
// Conventions
//   * R_ijkl is positive on the round sphere: R_ijkl = K(g_ik g_jl - g_il g_jk).
//   * Ric_jl = g^ik R_ijkl.
//   * A curvature-type tensor acts on 2-forms by (Rm ω)_ij = ½ R_ijkl ω_kl and
//     its matrix in a Lambda2Basis is M_ab = ⟨Rm ω_a, ω_b⟩ / ⟨ω_b, ω_b⟩.
//   * "Operator" norms (|W±|², det W±, block inner products) are taken on these
//     3x3 / 6x6 matrices.  The componentwise contraction Σ R_ijkl² is four
//     times the squared Frobenius norm of the 6x6 matrix.

#include "curv4/lambda2.hpp"
#include "curv4/tensor.hpp"

#include <array>

namespace curv4 {

/// General-dimension coefficients of the Weyl decomposition, evaluated at n = 4:
/// 1/(n-2) and 1/((n-1)(n-2)).
inline constexpr int kDimension = 4;
inline constexpr double kRicciCoefficient = 1.0 / (kDimension - 2);
inline constexpr double kScalarCoefficient = 1.0 / ((kDimension - 1) * (kDimension - 2));

template <class T>
struct CurvDecomp {
  SymBilinear4<T> metric;
  T scalar{};
  SymBilinear4<T> ricci;
  SymBilinear4<T> traceless_ricci;
  SymBilinear4<T> schouten;
  Block3<T> weyl_plus;
  Block3<T> weyl_minus;
  /// Off-diagonal Λ⁻ → Λ⁺ block of the curvature operator (rows Λ⁺).
  std::array<std::array<T, 3>, 3> ric_block{};
  AlgCurvTensor<T> full_weyl;
  /// Full 6x6 curvature operator in the frame's standard basis.
  Lambda2Operator<T> curvature_operator;
  int orientation = 1;

  const Block3<T>& weyl(Duality d) const {
    return d == Duality::self_dual ? weyl_plus : weyl_minus;
  }
};

/// Throws NonSymmetricInput if rm violates the curvature symmetries and
/// DegenerateMetric if the metric is not positive definite.  The block form
/// needs orthonormal-frame components; a non-identity metric is accepted for
/// double (blocks are taken in the g^{-1/2} frame) and rejected with
/// NotOrthonormalFrame in exact mode.
template <class T>
CurvDecomp<T> weyl_decompose(const AlgCurvTensor<T>& rm,
                             const SymBilinear4<T>& metric = SymBilinear4<T>::identity());

/// W + ½ Ric⊙g − (R/12) g⊙g.
template <class T>
AlgCurvTensor<T> recompose(const CurvDecomp<T>& d);

/// (a⊙b)_ijkl = a_ik b_jl + a_jl b_ik − a_il b_jk − a_jk b_il.
template <class T>
AlgCurvTensor<T> kulkarni_nomizu(const SymBilinear4<T>& a, const SymBilinear4<T>& b);

/// Ricci contraction Σ_ik g^ik R_ijkl for an orthonormal frame.
template <class T>
SymBilinear4<T> ricci_contraction(const AlgCurvTensor<T>& rm);

/// max_{j,l} |Σ_i W_ijil|.
template <class T>
T weyl_trace_residual(const AlgCurvTensor<T>& w);

/// (Rm ω)_ij = ½ R_ijkl ω_kl.
template <class T>
std::array<std::array<T, 4>, 4> act_on_two_form(const AlgCurvTensor<T>& rm, const Bivector& w);

/// Throws BasisNotOrthogonal unless the Gram matrix of the basis is 2·Id.
template <class T>
Lambda2Operator<T> as_lambda2_operator(const AlgCurvTensor<T>& rm, const Lambda2Basis& basis);

/// Convenience: operator in the standard basis for rm's orientation.
template <class T>
Lambda2Operator<T> as_lambda2_operator(const AlgCurvTensor<T>& rm);

/// trace(aᵀ b); throws DualityMismatch if the tags differ.
template <class T>
T block_inner(const Block3<T>& a, const Block3<T>& b);

template <class T>
struct BlockNorms {
  T scalar{};
  T traceless_ricci_sq{};  // Σ_ij R̊ic_ij²
  T weyl_plus_sq{};        // Σ (w_i⁺)²
  T weyl_minus_sq{};
  T det_weyl_plus{};
  T det_weyl_minus{};

  double traceless_ricci() const;
  double weyl_plus() const;
  double weyl_minus() const;
};

template <class T>
BlockNorms<T> block_norms(const CurvDecomp<T>& d);

/// (R̊ic⊙R̊ic)^± as a 3x3 block in the decomposition's frame.
template <class T>
Block3<T> kn_square_block(const CurvDecomp<T>& d, Duality duality);

/// Same, straight from a traceless Ricci tensor and an orientation.
template <class T>
Block3<T> kn_square_block(const SymBilinear4<T>& ric0, int orientation, Duality duality);

}  // namespace curv4
