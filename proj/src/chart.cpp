#include "curv4/chart.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace curv4 {

MetricChart::MetricChart(const std::array<Axis, 4>& axes, std::vector<MetricUpper> samples,
                         std::optional<std::vector<double>> potential)
    : axes_(axes), metric_(std::move(samples)), potential_(std::move(potential)) {
  std::size_t total = 1;
  for (std::size_t a = 0; a < 4; ++a) {
    if (axes_[a].count < kMinNodes)
      throw Error(ErrorCode::GridTooCoarse,
                  "axis " + std::to_string(a) + " has fewer than 5 nodes");
    if (!(axes_[a].max > axes_[a].min))
      throw Error(ErrorCode::GridTooCoarse, "axis " + std::to_string(a) + " has an empty range");
    total *= axes_[a].count;
  }
  stride_[3] = 1;
  for (std::size_t a = 3; a > 0; --a) stride_[a - 1] = stride_[a] * axes_[a].count;
  if (metric_.size() != total)
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(total) +
                                                " metric samples, got " +
                                                std::to_string(metric_.size()));
  if (potential_ && potential_->size() != total)
    throw Error(ErrorCode::InvalidArgument, "potential sample count does not match the grid");
  for (std::size_t n = 0; n < total; ++n)
    if (!metric(n).is_positive_definite())
      throw Error(ErrorCode::MetricNotPositiveDefinite,
                  "metric is not positive definite at node " + std::to_string(n));
}

MetricChart MetricChart::sample(const std::array<Axis, 4>& axes,
                                const std::function<Matrix4Array(const Point&)>& metric,
                                const std::function<double(const Point&)>& potential) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.count;
  std::vector<MetricUpper> g(total);
  std::optional<std::vector<double>> f;
  if (potential) f.emplace(total);
  std::size_t n = 0;
  for (std::size_t i0 = 0; i0 < axes[0].count; ++i0)
    for (std::size_t i1 = 0; i1 < axes[1].count; ++i1)
      for (std::size_t i2 = 0; i2 < axes[2].count; ++i2)
        for (std::size_t i3 = 0; i3 < axes[3].count; ++i3, ++n) {
          const Point x{axes[0].coord(i0), axes[1].coord(i1), axes[2].coord(i2),
                        axes[3].coord(i3)};
          const Matrix4Array m = metric(x);
          std::size_t k = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) g[n][k++] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          if (f) (*f)[n] = potential(x);
        }
  return MetricChart(axes, std::move(g), std::move(f));
}

std::size_t MetricChart::flat(const Index4& idx) const {
  return idx[0] * stride_[0] + idx[1] * stride_[1] + idx[2] * stride_[2] + idx[3];
}

Index4 MetricChart::unflat(std::size_t node) const {
  Index4 idx{};
  for (std::size_t a = 0; a < 4; ++a) {
    idx[a] = node / stride_[a];
    node %= stride_[a];
  }
  return idx;
}

Point MetricChart::coords(std::size_t node) const {
  const Index4 idx = unflat(node);
  return {axes_[0].coord(idx[0]), axes_[1].coord(idx[1]), axes_[2].coord(idx[2]),
          axes_[3].coord(idx[3])};
}

std::size_t MetricChart::shifted(std::size_t node, int axis, long offset) const {
  const long s = static_cast<long>(stride_[static_cast<std::size_t>(axis)]);
  return static_cast<std::size_t>(static_cast<long>(node) + offset * s);
}

bool MetricChart::interior(std::size_t node, std::size_t margin) const {
  const Index4 idx = unflat(node);
  for (std::size_t a = 0; a < 4; ++a)
    if (idx[a] < margin || idx[a] + margin >= axes_[a].count) return false;
  return true;
}

SymBilinear4<double> MetricChart::metric(std::size_t node) const {
  SymBilinear4<double> g;
  std::size_t k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) g.set(i, j, metric_[node][k++]);
  return g;
}

double MetricChart::potential(std::size_t node) const { return potential_values()[node]; }

const std::vector<double>& MetricChart::potential_values() const {
  if (!potential_) throw Error(ErrorCode::MissingPotential, "chart carries no potential samples");
  return *potential_;
}

namespace {

double parse_double(const std::string& token, std::size_t line) {
  double v = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": not a number: '" + token + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

MetricChart read_chart(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number) || tokens(line) != std::vector<std::string>{"CURV4-CHART", "v1"})
    throw Error(ErrorCode::ParseError, "missing 'CURV4-CHART v1' header");

  if (!next_line(in, line, number)) throw Error(ErrorCode::ParseError, "missing axes line");
  auto t = tokens(line);
  if (t.size() != 13 || t[0] != "axes")
    throw Error(ErrorCode::ParseError, "axes line needs 'axes' and four 'min max count' triples");
  std::array<Axis, 4> axes{};
  for (std::size_t a = 0; a < 4; ++a) {
    axes[a].min = parse_double(t[1 + 3 * a], number);
    axes[a].max = parse_double(t[2 + 3 * a], number);
    const std::string& c = t[3 + 3 * a];
    std::size_t count = 0;
    const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
    if (ec != std::errc() || ptr != c.data() + c.size())
      throw Error(ErrorCode::ParseError, "axis node count is not an integer: '" + c + "'");
    axes[a].count = count;
  }
  for (const auto& a : axes)
    if (a.count < MetricChart::kMinNodes)
      throw Error(ErrorCode::GridTooCoarse, "every axis needs at least 5 nodes");

  if (!next_line(in, line, number)) throw Error(ErrorCode::ParseError, "missing fields line");
  t = tokens(line);
  if (t.size() != 3 || t[0] != "fields" || (t[1] != "g[10]" && t[1] != "g10"))
    throw Error(ErrorCode::ParseError, "fields line must read 'fields g[10] f[0|1]'");
  bool with_f = false;
  if (t[2] == "f[1]" || t[2] == "f1")
    with_f = true;
  else if (t[2] != "f[0]" && t[2] != "f0")
    throw Error(ErrorCode::ParseError, "fields line must read 'fields g[10] f[0|1]'");

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.count;
  std::vector<MetricUpper> g(total);
  std::optional<std::vector<double>> f;
  if (with_f) f.emplace(total);
  const std::size_t width = with_f ? 11 : 10;
  for (std::size_t n = 0; n < total; ++n) {
    if (!next_line(in, line, number))
      throw Error(ErrorCode::ParseError, "truncated chart: expected " + std::to_string(total) +
                                             " node lines, found " + std::to_string(n));
    t = tokens(line);
    if (t.size() != width)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected " +
                                             std::to_string(width) + " values");
    for (std::size_t k = 0; k < 10; ++k) g[n][k] = parse_double(t[k], number);
    if (with_f) (*f)[n] = parse_double(t[10], number);
  }
  if (next_line(in, line, number))
    throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": trailing data");
  return MetricChart(axes, std::move(g), std::move(f));
}

MetricChart load_chart(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open chart file '" + path + "'");
  return read_chart(in);
}

void write_chart(std::ostream& out, const MetricChart& chart) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "CURV4-CHART v1\naxes";
  for (const auto& a : chart.axes()) out << "  " << a.min << ' ' << a.max << ' ' << a.count;
  out << "\nfields g[10] f[" << (chart.has_potential() ? 1 : 0) << "]\n";
  for (std::size_t n = 0; n < chart.size(); ++n) {
    const auto& g = chart.metric_upper(n);
    for (std::size_t k = 0; k < 10; ++k) out << (k ? " " : "") << g[k];
    if (chart.has_potential()) out << ' ' << chart.potential(n);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace curv4
