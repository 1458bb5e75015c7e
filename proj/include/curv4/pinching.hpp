#pragma once

// Pointwise evaluation of the algebraic inequalities and pinching conditions
// for four-dimensional shrinking solitons.
//
// Norm convention: |W±|² = Σ (w_i±)², det W± and ⟨A, B⟩ = tr(AᵀB) on 3x3
// blocks of the curvature operator; |W|² = |W⁺|² + |W⁻|² for the full Weyl
// tensor; |R̊ic|² = Σ R̊ic_ij².  Componentwise tensor norms are four times the
// operator ones and are named as such.

#include "curv4/algebra.hpp"
#include "curv4/eigen3.hpp"
#include "curv4/surd.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace curv4 {

enum class ConditionId {
  prop21a,
  prop21b,
  prop22a,
  prop22b,
  thm1_plus,
  thm1_minus,
  catino_12,
  catino_13,
  remark_14,
};

std::string_view to_string(ConditionId id);

struct PinchReport {
  ConditionId id{};
  double lhs = 0;
  double rhs = 0;
  /// Oriented so that a non-negative margin means the condition holds.
  double margin = 0;
  double tolerance = 0;
  bool satisfied = false;
  bool equality_flag = false;
  std::string equality_diagnosis;

  /// Set when lhs/rhs/margin were evaluated in exact arithmetic; the strings
  /// then carry the exact values and `satisfied` / `equality_flag` are exact.
  bool exact = false;
  std::string lhs_exact, rhs_exact, margin_exact;

  /// Outer bound of a chained inequality (prop21b: (√6/18)|W|³).
  std::optional<double> rhs_outer;
  /// lhs / (|R̊ic|²|W⁺|) for remark_14 when the denominator is non-zero.
  std::optional<double> ratio;
  std::string note;
};

/// 3/2 w₃² ≤ |W|² and det W ≤ (1/6) w₃|W|² ≤ (√6/18)|W|³.
/// Throws TraceNotZero unless the spectrum sums to zero.
std::pair<PinchReport, PinchReport> check_prop21(const Spectrum3<double>& s);
std::pair<PinchReport, PinchReport> check_prop21(const Spectrum3<Surd>& s);

/// (a) Σ(R̊ic⊙R̊ic)²_ijkl ≤ 6|R̊ic|⁴, equality iff 4|R̊ic²|² = |R̊ic|⁴;
/// (b) 4‖(R̊ic⊙R̊ic)⁺‖²_op ≤ 6|R̊ic|⁴.  Throws NotTraceFree.
template <class T>
std::pair<PinchReport, PinchReport> check_prop22(const SymBilinear4<T>& ric0, int orientation = 1);
template <class T>
std::pair<PinchReport, PinchReport> check_prop22(const CurvDecomp<T>& d);

/// |W±|² − √6|W±|³ ≥ ½⟨(R̊ic⊙R̊ic)±, W±⟩.
template <class T>
PinchReport check_theorem1(const CurvDecomp<T>& d, Duality duality);

/// |W|R ≤ √3(|R̊ic| − R/(2√3))² and |W| ≤ γ||R̊ic| − R/(2√3)|.
template <class T>
std::pair<PinchReport, PinchReport> check_catino(const CurvDecomp<T>& d, const T& gamma);

/// ⟨(R̊ic⊙R̊ic)±, W±⟩ ≤ √6|R̊ic|²|W±|.
template <class T>
PinchReport check_remark14(const CurvDecomp<T>& d, Duality duality = Duality::self_dual);

/// remark_14 evaluated directly on a traceless Ricci tensor and a Weyl block.
PinchReport check_remark14(const SymBilinear4<double>& ric0, const Block3<double>& weyl,
                           int orientation = 1);

struct FuzzOptions {
  /// Margins below −violation_tol count as violations.
  double violation_tol = 1e-12;
  /// Margins below this count as near-equality hits.
  double near_equality = 1e-6;
  /// 0 = CURV4_THREADS or hardware concurrency.
  unsigned threads = 0;
};

struct FuzzSummary {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::uint64_t near_equality_hits = 0;
  std::uint64_t seed = 0;
  double worst_margin = 0;
  /// Per-condition violation counts in the order prop21a, prop21b, prop22a,
  /// prop22b, remark_14.
  std::array<std::uint64_t, 5> violations_by_check{};

  friend bool operator==(const FuzzSummary&, const FuzzSummary&) = default;
};

/// Random trace-free spectra and trace-free symmetric 4x4 matrices (entries
/// uniform in [−1,1], projected), checked against prop21, prop22 and remark_14.
/// The result depends only on (trials, seed), never on the worker count.
FuzzSummary fuzz_inequalities(std::uint64_t trials, std::uint64_t seed,
                              const FuzzOptions& options = {});

/// Uniform symmetric 4x4 matrix with entries in [−1,1] projected to trace zero.
template <class Rng>
SymBilinear4<double> random_traceless_symmetric(Rng& rng);

}  // namespace curv4

#include "curv4/detail/random_traceless.hpp"
