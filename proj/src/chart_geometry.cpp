#include "curv4/chart_geometry.hpp"

#include "curv4/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace curv4 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t g_slot(int i, int j) { return SymBilinear4<double>::slot(i, j); }

std::size_t c_index(int k, int i, int j) { return static_cast<std::size_t>((k * 4 + i) * 4 + j); }

std::size_t m_index(int i, int j) { return static_cast<std::size_t>(i * 4 + j); }

Eigen::Matrix4d to_eigen(const MetricUpper& g) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = g[g_slot(i, j)];
  return m;
}

// E = g^{-1/2}, the symmetric positive root.
Eigen::Matrix4d inverse_sqrt(const MetricUpper& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(to_eigen(g));
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

ChartGeometry::ChartGeometry(const MetricChart& chart, unsigned threads)
    : chart_(chart), threads_(worker_count(threads)) {
  for (std::size_t a = 0; a < 4; ++a) spacing_[a] = chart_.axes()[a].step();
  const std::size_t n = chart_.size();
  inverse_.resize(n);
  gamma_.assign(n, Christoffel{});
  ricci_.assign(n, std::array<double, 16>{});
  scalar_.assign(n, kNaN);

  parallel_for(n, threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const Eigen::Matrix4d inv = to_eigen(chart_.metric_upper(node)).inverse();
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) inverse_[node][m_index(i, j)] = inv(i, j);
    }
  });

  // Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
  parallel_for(n, threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      if (!chart_.interior(node, 1)) continue;
      std::array<MetricUpper, 4> dg{};
      for (int a = 0; a < 4; ++a) {
        const auto& plus = chart_.metric_upper(chart_.shifted(node, a, 1));
        const auto& minus = chart_.metric_upper(chart_.shifted(node, a, -1));
        for (std::size_t s = 0; s < 10; ++s)
          dg[static_cast<std::size_t>(a)][s] = (plus[s] - minus[s]) / (2.0 * spacing_[static_cast<std::size_t>(a)]);
      }
      auto d = [&](int a, int i, int j) { return dg[static_cast<std::size_t>(a)][g_slot(i, j)]; };
      const auto& inv = inverse_[node];
      Christoffel& G = gamma_[node];
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
          for (int j = i; j < 4; ++j) {
            double s = 0;
            for (int l = 0; l < 4; ++l)
              s += inv[m_index(k, l)] * (d(i, j, l) + d(j, i, l) - d(l, i, j));
            G[c_index(k, i, j)] = G[c_index(k, j, i)] = 0.5 * s;
          }
    }
  });

  parallel_for(n, threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      if (!chart_.interior(node, 1)) continue;
      const AlgCurvTensor<double> rm = riemann(node);
      const auto& inv = inverse_[node];
      auto& ric = ricci_[node];
      double scalar = 0;
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) {
          double s = 0;
          for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) s += inv[m_index(i, k)] * rm(i, j, k, l);
          ric[m_index(j, l)] = s;
        }
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) scalar += inv[m_index(j, l)] * ric[m_index(j, l)];
      scalar_[node] = scalar;
    }
  });
}

std::vector<std::size_t> ChartGeometry::nodes(std::size_t margin) const {
  std::vector<std::size_t> out;
  for (std::size_t node = 0; node < chart_.size(); ++node)
    if (chart_.interior(node, margin)) out.push_back(node);
  return out;
}

AlgCurvTensor<double> ChartGeometry::riemann(std::size_t node) const {
  if (!chart_.interior(node, 1))
    throw Error(ErrorCode::InvalidArgument, "curvature needs a node one step from the boundary");
  // ∂_a ∂_b g: three-point stencil on the diagonal, four corners off it
  std::array<std::array<MetricUpper, 4>, 4> ddg{};
  const auto& centre = chart_.metric_upper(node);
  for (int a = 0; a < 4; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const auto& plus = chart_.metric_upper(chart_.shifted(node, a, 1));
    const auto& minus = chart_.metric_upper(chart_.shifted(node, a, -1));
    for (std::size_t s = 0; s < 10; ++s)
      ddg[ua][ua][s] = (plus[s] - 2.0 * centre[s] + minus[s]) / (spacing_[ua] * spacing_[ua]);
    for (int b = a + 1; b < 4; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      auto corner = [&](long sa, long sb) -> const MetricUpper& {
        return chart_.metric_upper(chart_.shifted(chart_.shifted(node, a, sa), b, sb));
      };
      const auto &pp = corner(1, 1), &pm = corner(1, -1), &mp = corner(-1, 1), &mm = corner(-1, -1);
      for (std::size_t s = 0; s < 10; ++s)
        ddg[ua][ub][s] = ddg[ub][ua][s] = (pp[s] - pm[s] - mp[s] + mm[s]) / (4.0 * spacing_[ua] * spacing_[ub]);
    }
  }
  auto dd = [&](int a, int b, int i, int j) {
    return ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][g_slot(i, j)];
  };
  const Christoffel& G = gamma_[node];
  const SymBilinear4<double> g = chart_.metric(node);
  // Γ_e,ij = g_ef Γ^f_ij
  Christoffel low{};
  for (int e = 0; e < 4; ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int f = 0; f < 4; ++f) s += g(e, f) * G[c_index(f, i, j)];
        low[c_index(e, i, j)] = s;
      }

  // R_ijkl = ½(∂_i∂_l g_jk + ∂_j∂_k g_il − ∂_i∂_k g_jl − ∂_j∂_l g_ik)
  //          + Γ_e,li Γ^e_kj − Γ_e,lj Γ^e_ki,  so that R_ijij is the sectional curvature.
  AlgCurvTensor<double>::Components c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.5 * (dd(i, l, j, k) + dd(j, k, i, l) - dd(i, k, j, l) - dd(j, l, i, k));
          for (int e = 0; e < 4; ++e)
            s += low[c_index(e, l, i)] * G[c_index(e, k, j)] - low[c_index(e, l, j)] * G[c_index(e, k, i)];
          c[AlgCurvTensor<double>::index(i, j, k, l)] = s;
        }
  return AlgCurvTensor<double>::raw(c);
}

NodeCurvature ChartGeometry::frame_curvature(std::size_t node) const {
  const AlgCurvTensor<double> rm = riemann(node);
  const Eigen::Matrix4d E = inverse_sqrt(chart_.metric_upper(node));

  // contract one index at a time: 4 · 256 · 4 operations
  std::array<double, 256> a = rm.components(), b{};
  for (int slot = 0; slot < 4; ++slot) {
    for (int i0 = 0; i0 < 4; ++i0)
      for (int i1 = 0; i1 < 4; ++i1)
        for (int i2 = 0; i2 < 4; ++i2)
          for (int i3 = 0; i3 < 4; ++i3) {
            std::array<int, 4> idx{i0, i1, i2, i3};
            const int out = idx[static_cast<std::size_t>(slot)];
            double s = 0;
            for (int k = 0; k < 4; ++k) {
              idx[static_cast<std::size_t>(slot)] = k;
              s += E(out, k) * a[AlgCurvTensor<double>::index(idx[0], idx[1], idx[2], idx[3])];
            }
            b[AlgCurvTensor<double>::index(i0, i1, i2, i3)] = s;
          }
    a = b;
  }
  NodeCurvature nc;
  nc.node = node;
  nc.coords = chart_.coords(node);
  nc.rm = AlgCurvTensor<double>::raw(a);
  nc.ricci = ricci_contraction(nc.rm);
  nc.scalar = scalar_[node];
  return nc;
}

ScalarField ChartGeometry::scalar_field() const { return ScalarField{scalar_, 1}; }

Rank3 ChartGeometry::ricci_derivative(std::size_t node) const {
  if (!chart_.interior(node, 2))
    throw Error(ErrorCode::InvalidArgument, "∇Ric needs a node two steps from the boundary");
  const Christoffel& G = gamma_[node];
  const auto& ric = ricci_[node];
  Rank3 out{};
  for (int i = 0; i < 4; ++i) {
    const auto& plus = ricci_[chart_.shifted(node, i, 1)];
    const auto& minus = ricci_[chart_.shifted(node, i, -1)];
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = (plus[m_index(j, k)] - minus[m_index(j, k)]) / (2.0 * spacing_[static_cast<std::size_t>(i)]);
        for (int m = 0; m < 4; ++m)
          s -= G[c_index(m, i, j)] * ric[m_index(m, k)] + G[c_index(m, i, k)] * ric[m_index(j, m)];
        out[c_index(i, j, k)] = s;
      }
  }
  return out;
}

Rank3 ChartGeometry::cotton(std::size_t node) const {
  const Rank3 dric = ricci_derivative(node);
  const ScalarField r{scalar_, 1};
  const auto dR = gradient(r, node);
  const SymBilinear4<double> g = chart_.metric(node);
  Rank3 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        c[c_index(i, j, k)] = dric[c_index(i, j, k)] - dric[c_index(j, i, k)] -
                              (dR[static_cast<std::size_t>(i)] * g(j, k) -
                               dR[static_cast<std::size_t>(j)] * g(i, k)) / 6.0;
  return c;
}

double ChartGeometry::norm(const Rank3& t, std::size_t node) const {
  const auto& inv = inverse_[node];
  Rank3 a = t, b{};
  // raise each index in turn
  for (int slot = 0; slot < 3; ++slot) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          std::array<int, 3> idx{i, j, k};
          const int out = idx[static_cast<std::size_t>(slot)];
          double s = 0;
          for (int m = 0; m < 4; ++m) {
            idx[static_cast<std::size_t>(slot)] = m;
            s += inv[m_index(out, m)] * a[c_index(idx[0], idx[1], idx[2])];
          }
          b[c_index(i, j, k)] = s;
        }
    a = b;
  }
  double s = 0;
  for (std::size_t q = 0; q < 64; ++q) s += t[q] * a[q];
  return std::sqrt(std::max(0.0, s));
}

std::array<double, 4> ChartGeometry::gradient(const ScalarField& phi, std::size_t node) const {
  std::array<double, 4> d{};
  for (int a = 0; a < 4; ++a)
    d[static_cast<std::size_t>(a)] =
        (phi.values[chart_.shifted(node, a, 1)] - phi.values[chart_.shifted(node, a, -1)]) /
        (2.0 * spacing_[static_cast<std::size_t>(a)]);
  return d;
}

double ChartGeometry::potential_gradient_norm(std::size_t node) const {
  const ScalarField f{chart_.potential_values(), 0};
  const auto df = gradient(f, node);
  const auto& inv = inverse_[node];
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      s += inv[m_index(i, j)] * df[static_cast<std::size_t>(i)] * df[static_cast<std::size_t>(j)];
  return std::sqrt(std::max(0.0, s));
}

ScalarField ChartGeometry::drift_laplacian(const ScalarField& phi) const {
  const ScalarField f{chart_.potential_values(), 0};
  if (phi.values.size() != chart_.size())
    throw Error(ErrorCode::InvalidArgument, "field size does not match the chart");
  const std::size_t margin = std::max<std::size_t>(phi.margin + 1, 1);
  ScalarField out{std::vector<double>(chart_.size(), kNaN), margin};
  parallel_for(chart_.size(), threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      if (!chart_.interior(node, margin)) continue;
      const auto& v = phi.values;
      const auto dphi = gradient(phi, node);
      const auto df = gradient(f, node);
      const auto& inv = inverse_[node];
      const Christoffel& G = gamma_[node];
      double lap = 0, drift = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const double hi = spacing_[static_cast<std::size_t>(i)];
          const double hj = spacing_[static_cast<std::size_t>(j)];
          double second;
          if (i == j) {
            second = (v[chart_.shifted(node, i, 1)] - 2.0 * v[node] + v[chart_.shifted(node, i, -1)]) /
                     (hi * hi);
          } else {
            const std::size_t pp = chart_.shifted(chart_.shifted(node, i, 1), j, 1);
            const std::size_t pm = chart_.shifted(chart_.shifted(node, i, 1), j, -1);
            const std::size_t mp = chart_.shifted(chart_.shifted(node, i, -1), j, 1);
            const std::size_t mm = chart_.shifted(chart_.shifted(node, i, -1), j, -1);
            second = (v[pp] - v[pm] - v[mp] + v[mm]) / (4.0 * hi * hj);
          }
          for (int k = 0; k < 4; ++k) second -= G[c_index(k, i, j)] * dphi[static_cast<std::size_t>(k)];
          lap += inv[m_index(i, j)] * second;
          drift += inv[m_index(i, j)] * df[static_cast<std::size_t>(i)] * dphi[static_cast<std::size_t>(j)];
        }
      out.values[node] = lap - drift;
    }
  });
  return out;
}

ChartCurvature curvature_from_chart(const MetricChart& chart, unsigned threads) {
  const ChartGeometry geo(chart, threads);
  const auto ids = geo.nodes(1);
  ChartCurvature out;
  out.nodes.resize(ids.size());
  parallel_for(ids.size(), worker_count(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) out.nodes[q] = geo.frame_curvature(ids[q]);
  });
  return out;
}

CottonField cotton_tensor(const MetricChart& chart, unsigned threads) {
  const ChartGeometry geo(chart, threads);
  const auto ids = geo.nodes(2);
  CottonField out;
  out.nodes.resize(ids.size());
  parallel_for(ids.size(), worker_count(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      CottonNode& c = out.nodes[q];
      c.node = ids[q];
      c.components = geo.cotton(ids[q]);
      c.norm = geo.norm(c.components, ids[q]);
    }
  });
  for (const auto& c : out.nodes) out.max_norm = std::max(out.max_norm, c.norm);
  return out;
}

ScalarField drift_laplacian(const MetricChart& chart, const std::vector<double>& field) {
  const ChartGeometry geo(chart);
  return geo.drift_laplacian(ScalarField{field, 0});
}

Prop41Report check_prop41(const MetricChart& chart, unsigned threads) {
  chart.potential_values();
  const ChartGeometry geo(chart, threads);
  Prop41Report rep;
  const auto ids = geo.nodes(2);
  std::vector<std::optional<Prop41Node>> slots(ids.size());
  parallel_for(ids.size(), worker_count(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const std::size_t node = ids[q];
      const double grad_f = geo.potential_gradient_norm(node);
      if (grad_f <= rep.gradient_tol) continue;
      const NodeCurvature nc = geo.frame_curvature(node);
      Prop41Node p;
      p.node = node;
      p.lhs = std::sqrt(as_lambda2_operator(nc.rm).frobenius_sq());
      p.rhs_core = std::sqrt(nc.ricci.norm_sq()) + geo.norm(geo.ricci_derivative(node), node) / grad_f;
      if (p.lhs < 1e-12)
        p.ratio = 0;
      else
        p.ratio = p.rhs_core > 0 ? p.lhs / p.rhs_core : std::numeric_limits<double>::infinity();
      slots[q] = p;
    }
  });
  for (const auto& s : slots) {
    if (!s) {
      ++rep.excluded;
      continue;
    }
    rep.nodes.push_back(*s);
    rep.sup_ratio = std::max(rep.sup_ratio, s->ratio);
  }
  return rep;
}

namespace {

// Smallest s ≥ 0 with y_i ≤ y_0 + s (x_i − x_0) + tol for every sample, where
// sample 0 has the smallest x (largest y among ties).
std::size_t anchor_of(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double tie = 1e-12 * (1.0 + std::fabs(x[best]));
    if (x[i] < x[best] - tie || (std::fabs(x[i] - x[best]) <= tie && y[i] > y[best])) best = i;
  }
  return best;
}

double envelope_slope(const std::vector<double>& x, const std::vector<double>& y, double tol) {
  const std::size_t a = anchor_of(x, y);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - x[a];
    if (dx > 1e-12 * (1.0 + std::fabs(x[a]))) s = std::max(s, (y[i] - y[a] - tol) / dx);
  }
  return s;
}

double envelope_offset(const std::vector<double>& x, const std::vector<double>& y, double slope) {
  double c = 0;
  for (std::size_t i = 0; i < x.size(); ++i) c = std::max(c, y[i] - slope * x[i]);
  return c;
}

}  // namespace

GrowthFit fit_growth(const std::vector<GrowthSample>& samples, double support_fraction) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "growth fit needs samples");
  GrowthFit fit;
  fit.nodes_used = samples.size();
  fit.support_fraction = support_fraction;

  std::vector<double> f, r;
  for (const auto& s : samples) {
    f.push_back(s.f);
    r.push_back(s.scalar);
  }
  const std::size_t a = anchor_of(f, r);
  // g(ε) = max_i (R_i − R_a − ε (f_i − f_a)) is non-increasing because f_i ≥ f_a.
  auto excess = [&](double eps) {
    double g = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) g = std::max(g, r[i] - r[a] - eps * (f[i] - f[a]));
    return g;
  };
  double eps = 0;
  bool feasible = true;
  if (excess(0) > kGrowthTolerance) {
    if (excess(1.0) > kGrowthTolerance) {
      feasible = false;
      eps = 1.0;
    } else {
      double lo = 0, hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > kGrowthTolerance ? lo : hi) = mid;
      }
      eps = hi;
    }
  }
  fit.feasible = feasible && eps < 1.0;
  fit.epsilon_hat = eps;
  fit.A_hat = std::max(envelope_offset(f, r, fit.epsilon_hat), kMinimumA);
  fit.worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i)
    fit.worst_slack = std::max(fit.worst_slack, r[i] - fit.A_hat - fit.epsilon_hat * f[i]);

  std::vector<double> ric, rm, x1, x2;
  for (const auto& s : samples) {
    ric.push_back(s.ricci_norm);
    rm.push_back(s.rm_norm);
    x1.push_back(fit.epsilon_hat * s.f);
    x2.push_back(fit.epsilon_hat * s.f * s.f);
  }
  if (fit.epsilon_hat == 0.0) {
    fit.c0 = std::max(*std::max_element(ric.begin(), ric.end()),
                      *std::max_element(rm.begin(), rm.end()));
  } else {
    fit.c1 = envelope_slope(x1, ric, 0.0);
    fit.c2 = envelope_slope(x2, rm, 0.0);
    fit.c0 = std::max(envelope_offset(x1, ric, fit.c1), envelope_offset(x2, rm, fit.c2));
  }
  return fit;
}

GrowthFit fit_growth(const MetricChart& chart, unsigned threads) {
  chart.potential_values();
  const ChartGeometry geo(chart, threads);
  const auto ids = geo.nodes(1);
  if (ids.empty()) throw Error(ErrorCode::GridTooCoarse, "no interior nodes");
  std::vector<GrowthSample> samples(ids.size());
  std::vector<char> supported(ids.size(), 0);
  parallel_for(ids.size(), worker_count(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const NodeCurvature nc = geo.frame_curvature(ids[q]);
      samples[q] = GrowthSample{chart.potential(ids[q]), nc.scalar, std::sqrt(nc.ricci.norm_sq()),
                                std::sqrt(as_lambda2_operator(nc.rm).frobenius_sq())};
      supported[q] = geo.potential_gradient_norm(ids[q]) > 1e-8;
    }
  });
  const double support =
      static_cast<double>(std::count(supported.begin(), supported.end(), 1)) / static_cast<double>(ids.size());
  return fit_growth(samples, support);
}

}  // namespace curv4
