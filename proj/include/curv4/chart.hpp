#pragma once

// Gridded coordinate metric (and optional potential) on a box in R^4.
//
// File format, line oriented:
//   CURV4-CHART v1
//   axes  min0 max0 count0  min1 max1 count1  min2 max2 count2  min3 max3 count3
//   fields g[10] f[1]            (f[0] when no potential is stored)
//   g00 g01 g02 g03 g11 g12 g13 g22 g23 g33 [f]     one line per node
// Nodes are listed in row-major order: the last axis varies fastest.

#include "curv4/tensor.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace curv4 {

struct Axis {
  double min = 0;
  double max = 0;
  std::size_t count = 0;

  double step() const { return (max - min) / static_cast<double>(count - 1); }
  double coord(std::size_t i) const { return min + step() * static_cast<double>(i); }
};

using Point = std::array<double, 4>;
using Index4 = std::array<std::size_t, 4>;
using MetricUpper = std::array<double, 10>;

class MetricChart {
 public:
  static constexpr std::size_t kMinNodes = 5;

  /// Throws GridTooCoarse for an axis with fewer than five nodes or an empty
  /// interval, InvalidArgument on size mismatches and
  /// MetricNotPositiveDefinite at the first bad node.
  MetricChart(const std::array<Axis, 4>& axes, std::vector<MetricUpper> metric,
              std::optional<std::vector<double>> potential = std::nullopt);

  /// Samples closed-form fields at every node.
  static MetricChart sample(const std::array<Axis, 4>& axes,
                            const std::function<Matrix4Array(const Point&)>& metric,
                            const std::function<double(const Point&)>& potential = {});

  const std::array<Axis, 4>& axes() const { return axes_; }
  std::size_t size() const { return metric_.size(); }
  bool has_potential() const { return potential_.has_value(); }

  std::size_t flat(const Index4& idx) const;
  Index4 unflat(std::size_t node) const;
  Point coords(std::size_t node) const;
  /// Neighbour along `axis` shifted by `offset` (caller guarantees bounds).
  std::size_t shifted(std::size_t node, int axis, long offset) const;
  /// True when the node is at least `margin` nodes away from every face.
  bool interior(std::size_t node, std::size_t margin) const;

  const MetricUpper& metric_upper(std::size_t node) const { return metric_[node]; }
  SymBilinear4<double> metric(std::size_t node) const;
  /// Throws MissingPotential when the chart has no f samples.
  double potential(std::size_t node) const;
  const std::vector<double>& potential_values() const;

 private:
  std::array<Axis, 4> axes_{};
  std::array<std::size_t, 4> stride_{};
  std::vector<MetricUpper> metric_;
  std::optional<std::vector<double>> potential_;
};

/// Throws ParseError for malformed or truncated input.
MetricChart read_chart(std::istream& in);
MetricChart load_chart(const std::string& path);
void write_chart(std::ostream& out, const MetricChart& chart);

}  // namespace curv4
