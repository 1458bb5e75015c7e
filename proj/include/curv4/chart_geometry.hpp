#pragma once

// Finite-difference curvature of a coordinate metric chart.  All derivatives
// are second-order central differences; a quantity is reported only on nodes
// far enough from every face for its stencil:
//   margin 1  Christoffel symbols, ∇f, Riemann (from ∂∂g), Ricci, scalar
//   margin 2  ∇Ric, Cotton tensor, Δ_f of the scalar curvature
// Frame quantities use e_a = (g^{-1/2})_ab ∂_b at each node.

#include "curv4/algebra.hpp"
#include "curv4/chart.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace curv4 {

/// Per-node values of a scalar field, meaningful on nodes with the given
/// margin (entries elsewhere are NaN).
struct ScalarField {
  std::vector<double> values;
  std::size_t margin = 0;
};

struct NodeCurvature {
  std::size_t node = 0;
  Point coords{};
  AlgCurvTensor<double> rm;      // frame components
  SymBilinear4<double> ricci;    // frame components
  double scalar = 0;
};

using Christoffel = std::array<double, 64>;  // Γ^k_ij at [(k*4 + i)*4 + j]
using Rank3 = std::array<double, 64>;        // T_ijk at [(i*4 + j)*4 + k]

class ChartGeometry {
 public:
  explicit ChartGeometry(const MetricChart& chart, unsigned threads = 0);

  const MetricChart& chart() const { return chart_; }
  /// Nodes with the given margin, ascending.
  std::vector<std::size_t> nodes(std::size_t margin) const;

  const Christoffel& christoffel(std::size_t node) const { return gamma_[node]; }
  /// Coordinate components R_ijkl (margin 1).
  AlgCurvTensor<double> riemann(std::size_t node) const;
  NodeCurvature frame_curvature(std::size_t node) const;
  double scalar(std::size_t node) const { return scalar_[node]; }
  ScalarField scalar_field() const;

  /// ∇_i R_jk in coordinates (margin 2).
  Rank3 ricci_derivative(std::size_t node) const;
  /// C_ijk = ∇_i R_jk − ∇_j R_ik − (1/6)(∇_i R g_jk − ∇_j R g_ik) (margin 2).
  Rank3 cotton(std::size_t node) const;
  /// Full metric norm of a coordinate 3-tensor at a node.
  double norm(const Rank3& t, std::size_t node) const;

  /// ∂_i φ by central differences (needs field margin + 1).
  std::array<double, 4> gradient(const ScalarField& phi, std::size_t node) const;
  /// Δφ − ⟨∇f, ∇φ⟩; throws MissingPotential without f samples.
  ScalarField drift_laplacian(const ScalarField& phi) const;
  /// |∇f| at margin-1 nodes.
  double potential_gradient_norm(std::size_t node) const;

 private:
  std::array<double, 4> spacing_{};
  const MetricChart& chart_;
  std::vector<Christoffel> gamma_;
  std::vector<std::array<double, 16>> ricci_;  // coordinate Ricci, margin 1
  std::vector<double> scalar_;
  std::vector<std::array<double, 16>> inverse_;
  unsigned threads_;
};

struct ChartCurvature {
  std::vector<NodeCurvature> nodes;
};

/// Frame curvature at every margin-1 node.
ChartCurvature curvature_from_chart(const MetricChart& chart, unsigned threads = 0);

struct CottonNode {
  std::size_t node = 0;
  Rank3 components{};
  double norm = 0;
};

struct CottonField {
  std::vector<CottonNode> nodes;
  double max_norm = 0;
};

CottonField cotton_tensor(const MetricChart& chart, unsigned threads = 0);

/// Δ_f of a per-node field given on every node of the chart.
ScalarField drift_laplacian(const MetricChart& chart, const std::vector<double>& field);

struct Prop41Node {
  std::size_t node = 0;
  double lhs = 0;       // |Rm|, Frobenius norm of the Λ² operator
  double rhs_core = 0;  // |Ric| + |∇Ric| / |∇f|
  double ratio = 0;
};

struct Prop41Report {
  std::vector<Prop41Node> nodes;
  std::size_t excluded = 0;  // |∇f| ≤ gradient_tol
  double sup_ratio = 0;
  double gradient_tol = 1e-8;
};

/// Empirical sup of |Rm| / (|Ric| + |∇Ric|/|∇f|) over margin-2 nodes; a lower
/// bound for any admissible constant, never a value for it.
Prop41Report check_prop41(const MetricChart& chart, unsigned threads = 0);

struct GrowthFit {
  double epsilon_hat = 0;
  double A_hat = 0;
  double c0 = 0, c1 = 0, c2 = 0;
  bool feasible = false;
  double support_fraction = 0;
  std::size_t nodes_used = 0;
  /// max over nodes of R − A_hat − ε_hat f (≤ tolerance when feasible).
  double worst_slack = 0;
};

struct GrowthSample {
  double f = 0;
  double scalar = 0;
  double ricci_norm = 0;  // |Ric|
  double rm_norm = 0;     // operator Frobenius norm
};

inline constexpr double kGrowthTolerance = 1e-9;
inline constexpr double kMinimumA = 1e-9;

/// Minimal ε ∈ [0, 1) such that R ≤ A + εf with the line anchored at the
/// sample of smallest f (largest R among ties) and A = max(R − εf), found by
/// bisection; then upper envelopes |Ric| ≤ c0 + c1 εf and |Rm| ≤ c0 + c2 εf².
/// Adding samples whose f is not below the current minimum never lowers ε.
GrowthFit fit_growth(const std::vector<GrowthSample>& samples, double support_fraction = 1.0);
GrowthFit fit_growth(const MetricChart& chart, unsigned threads = 0);

}  // namespace curv4
