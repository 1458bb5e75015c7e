#pragma once

// Closed-form gradient shrinking solitons normalized to Ric + Hess f = ½g and
// R + |∇f|² = f.  Curvature is returned in an orthonormal frame adapted to
// each model's product (or unitary) structure; the frame is the normalized
// coordinate frame of the chart metric whenever that metric is diagonal.

#include "curv4/algebra.hpp"
#include "curv4/chart.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curv4 {

enum class ModelId { gaussian_r4, round_s4, cylinder_s3xr, cylinder_s2xr2, cp2_fubini_study };

struct ModelInfo {
  ModelId id;
  std::string_view name;
  bool compact;
  std::string_view geometry;
  std::string_view coordinates;
  std::string_view potential;
};

const std::array<ModelInfo, 5>& models();
const ModelInfo& model_info(ModelId id);
/// Throws UnknownModel.
ModelId parse_model(std::string_view name);

template <class T>
using Point4 = std::array<T, 4>;

template <class T>
struct ModelPoint {
  Point4<T> coords{};
  AlgCurvTensor<T> rm;
  SymBilinear4<T> metric;  // identity: components are frame components
  SymBilinear4<T> ricci;
  T scalar{};
  T f{};
  std::array<T, 4> grad_f{};
  SymBilinear4<T> hess_f;
};

/// Throws PointOutOfDomain outside the chart (polar angles must lie in (0, π)).
template <class T>
ModelPoint<T> model_data(ModelId id, const Point4<T>& x);

/// Deterministic points inside the model's chart domain with coordinates
/// k/1000 for integer k.
template <class T>
std::vector<Point4<T>> sample_points(ModelId id, std::size_t count, std::uint64_t seed);

struct IdentityReport {
  std::string id;
  /// Residual at the first sampled point.
  double residual = 0;
  double max_residual = 0;
  std::size_t points_checked = 0;
  double tolerance = 0;
  bool within_tolerance = false;
  bool exact = false;
  std::string max_residual_exact;
  std::string note;
};

/// soliton_eq and the identities lem1_1 .. lem1_7 evaluated at the given points.
/// Every catalog model has parallel Ricci curvature, so ∇R, ∇Ric, Δ_f R,
/// Δ_f Ric and Δ_f Rm vanish identically and each identity reduces to an
/// algebraic statement about the pointwise data.
template <class T>
std::vector<IdentityReport> verify_hamilton_identities(ModelId id,
                                                       const std::vector<Point4<T>>& points);

/// 2|W±|² − 36 det W± − ⟨(R̊ic⊙R̊ic)±, W±⟩, the reduced Weitzenböck identity
/// for ∇W = 0.
template <class T>
IdentityReport weitzenbock_residual(ModelId id, Duality duality);

struct AsymptoticsReport {
  double r0 = 0;
  std::size_t samples = 0;
  /// max |r − 2√f| over the samples: the least c that works.
  double c_needed = 0;
  std::optional<double> c_found;
  bool holds = false;
};

/// Smallest c on the grid 0, c_step, 2c_step, ... ≤ c_max such that
/// ¼(r − c)² ≤ f ≤ ¼(r + c)² at every sample with r ≥ r0, where r is the
/// distance to a minimum point of f.  Throws CompactModel for S⁴ and CP².
AsymptoticsReport potential_asymptotics(ModelId id, const std::vector<double>& radii,
                                        double c_max, double c_step);

/// Coordinate metric and potential of the model's chart.
Matrix4Array chart_metric(ModelId id, const Point& x);
double chart_potential(ModelId id, const Point& x);

/// A box of `count` nodes per axis with spacing h centred on a generic point
/// of the model's chart.
std::array<Axis, 4> chart_box(ModelId id, double h, std::size_t count = 5);
MetricChart export_chart(ModelId id, const std::array<Axis, 4>& axes);

}  // namespace curv4
