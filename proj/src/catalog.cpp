#include "curv4/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace curv4 {

namespace {

constexpr std::array<ModelInfo, 5> kModels{{
    {ModelId::gaussian_r4, "gaussian_r4", false, "flat R^4", "Cartesian x0..x3",
     "f = |x|^2/4"},
    {ModelId::round_s4, "round_s4", true, "round S^4 of radius sqrt(6), Ric = g/2, R = 2",
     "stereographic x0..x3", "f = 2"},
    {ModelId::cylinder_s3xr, "cylinder_s3xr", false,
     "S^3 of radius 2 times R, Ric = diag(1/2,1/2,1/2,0), R = 3/2",
     "hyperspherical (psi, theta, phi) on S^3, t on R", "f = t^2/4 + 3/2"},
    {ModelId::cylinder_s2xr2, "cylinder_s2xr2", false,
     "S^2 of radius sqrt(2) times R^2, Ric = diag(1/2,1/2,0,0), R = 1",
     "polar (theta, phi) on S^2, y1, y2 on R^2", "f = |y|^2/4 + 1"},
    {ModelId::cp2_fubini_study, "cp2_fubini_study", true,
     "Fubini-Study CP^2 with holomorphic sectional curvature 1/3, Ric = g/2, R = 2",
     "affine z1 = x0 + i x1, z2 = x2 + i x3", "f = 2"},
}};

template <class T>
T half() {
  return T(1) / T(2);
}

// K (P_ik P_jl − P_il P_jk) for the coordinate projector P onto `axes`.
template <class T>
AlgCurvTensor<T> space_form_block(const T& K, std::initializer_list<int> axes) {
  std::array<T, 4> d{T(0), T(0), T(0), T(0)};
  for (int a : axes) d[static_cast<std::size_t>(a)] = T(1);
  const auto p = SymBilinear4<T>::diagonal(d);
  return (K / T(2)) * kulkarni_nomizu(p, p);
}

// Constant holomorphic sectional curvature H with complex structure J:
// (H/4)(δ_ik δ_jl − δ_il δ_jk + J_ik J_jl − J_il J_jk + 2 J_ij J_kl).
template <class T>
AlgCurvTensor<T> fubini_study_frame(const T& H) {
  // Kähler form e¹∧e² + e³∧e⁴, the first self-dual basis vector.
  std::array<std::array<int, 4>, 4> J{};
  J[0][1] = 1;
  J[1][0] = -1;
  J[2][3] = 1;
  J[3][2] = -1;
  auto delta = [](int a, int b) { return a == b ? 1 : 0; };
  typename AlgCurvTensor<T>::Components c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          auto Jv = [&](int a, int b) {
            return J[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          };
          const int v = delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k) +
                        Jv(i, k) * Jv(j, l) - Jv(i, l) * Jv(j, k) + 2 * Jv(i, j) * Jv(k, l);
          c[AlgCurvTensor<T>::index(i, j, k, l)] = H / T(4) * T(v);
        }
  return AlgCurvTensor<T>::raw(c);
}

template <class T>
void require_polar(const T& angle, const char* what) {
  const double a = to_double(angle);
  if (!(a > 0.0 && a < std::numbers::pi))
    throw Error(ErrorCode::PointOutOfDomain, std::string(what) + " must lie in (0, pi)");
}

}  // namespace

const std::array<ModelInfo, 5>& models() { return kModels; }

const ModelInfo& model_info(ModelId id) { return kModels[static_cast<std::size_t>(id)]; }

ModelId parse_model(std::string_view name) {
  for (const auto& m : kModels)
    if (m.name == name) return m.id;
  throw Error(ErrorCode::UnknownModel, "unknown model '" + std::string(name) + "'");
}

template <class T>
ModelPoint<T> model_data(ModelId id, const Point4<T>& x) {
  ModelPoint<T> p;
  p.coords = x;
  p.metric = SymBilinear4<T>::identity();
  std::array<T, 4> hess{T(0), T(0), T(0), T(0)};
  switch (id) {
    case ModelId::gaussian_r4: {
      p.f = T(0);
      for (std::size_t i = 0; i < 4; ++i) {
        p.f += x[i] * x[i] / T(4);
        p.grad_f[i] = x[i] / T(2);
        hess[i] = half<T>();
      }
      break;
    }
    case ModelId::round_s4: {
      p.rm = space_form_block(T(1) / T(6), {0, 1, 2, 3});
      p.f = T(2);
      break;
    }
    case ModelId::cylinder_s3xr: {
      require_polar(x[0], "psi");
      require_polar(x[1], "theta");
      p.rm = space_form_block(T(1) / T(4), {0, 1, 2});
      p.f = x[3] * x[3] / T(4) + T(3) / T(2);
      p.grad_f[3] = x[3] / T(2);
      hess[3] = half<T>();
      break;
    }
    case ModelId::cylinder_s2xr2: {
      require_polar(x[0], "theta");
      p.rm = space_form_block(half<T>(), {0, 1});
      p.f = (x[2] * x[2] + x[3] * x[3]) / T(4) + T(1);
      p.grad_f[2] = x[2] / T(2);
      p.grad_f[3] = x[3] / T(2);
      hess[2] = hess[3] = half<T>();
      break;
    }
    case ModelId::cp2_fubini_study: {
      p.rm = fubini_study_frame(T(1) / T(3));
      p.f = T(2);
      break;
    }
  }
  p.hess_f = SymBilinear4<T>::diagonal(hess, Role::hessian);
  p.ricci = ricci_contraction(p.rm).with_role(Role::ricci);
  p.scalar = p.ricci.trace();
  return p;
}

template <class T>
std::vector<Point4<T>> sample_points(ModelId id, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&](long lo, long hi) {
    const long k = std::uniform_int_distribution<long>(lo, hi)(rng);
    return T(k) / T(1000);
  };
  std::vector<Point4<T>> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Point4<T> x;
    switch (id) {
      case ModelId::cylinder_s2xr2:
        x = {draw(100, 3000), draw(0, 6200), draw(-5000, 5000), draw(-5000, 5000)};
        break;
      case ModelId::cylinder_s3xr:
        x = {draw(100, 3000), draw(100, 3000), draw(0, 6200), draw(-5000, 5000)};
        break;
      default:
        x = {draw(-5000, 5000), draw(-5000, 5000), draw(-5000, 5000), draw(-5000, 5000)};
        break;
    }
    out.push_back(x);
  }
  return out;
}

namespace {

template <class T>
struct Accumulator {
  IdentityReport report;
  T first{};
  T worst{};

  explicit Accumulator(std::string id) { report.id = std::move(id); }

  void add(const T& residual) {
    const T r = abs_value(residual);
    if (report.points_checked == 0) first = r;
    if (report.points_checked == 0 || worst < r) worst = r;
    ++report.points_checked;
  }

  IdentityReport finish() {
    report.exact = ScalarTraits<T>::exact;
    report.residual = to_double(first);
    report.max_residual = to_double(worst);
    if constexpr (ScalarTraits<T>::exact) {
      report.tolerance = 0;
      report.within_tolerance = worst == 0;
      report.max_residual_exact = worst.str();
    } else {
      report.tolerance = 1e-12;
      report.within_tolerance = worst <= 1e-12;
    }
    return report;
  }
};

template <class T>
T max_abs(const SymBilinear4<T>& a) {
  T m(0);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (m < abs_value(a(i, j))) m = abs_value(a(i, j));
  return m;
}

}  // namespace

template <class T>
std::vector<IdentityReport> verify_hamilton_identities(ModelId id,
                                                       const std::vector<Point4<T>>& points) {
  Accumulator<T> soliton("soliton_eq"), l1("lem1_1"), l2("lem1_2"), l3("lem1_3"), l4("lem1_4"),
      l5("lem1_5"), l6("lem1_6"), l7("lem1_7");
  for (const auto& x : points) {
    const ModelPoint<T> p = model_data(id, x);
    const auto& ric = p.ricci;

    soliton.add(max_abs(ric + p.hess_f - half<T>() * p.metric));
    l1.add(p.scalar + p.hess_f.trace() - T(2));

    // ∇R = 0, so ½∇R − Ric(∇f) = −Ric(∇f)
    T worst2(0);
    for (int i = 0; i < 4; ++i) {
      T s(0);
      for (int j = 0; j < 4; ++j) s += ric(i, j) * p.grad_f[static_cast<std::size_t>(j)];
      if (worst2 < abs_value(s)) worst2 = abs_value(s);
    }
    l2.add(worst2);

    // Δ_f R = 0
    l3.add(p.scalar - T(2) * ric.norm_sq());

    T grad_sq(0);
    for (const auto& g : p.grad_f) grad_sq += g * g;
    l4.add(p.scalar + grad_sq - p.f);

    // Δ_f R_ij = 0
    T worst5(0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        T s = ric(i, j);
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) s -= T(2) * p.rm(i, k, j, l) * ric(k, l);
        if (worst5 < abs_value(s)) worst5 = abs_value(s);
      }
    l5.add(worst5);

    // ∇Rm = 0 on every model, so Δ_f Rm vanishes and only the consistency of
    // a parallel curvature tensor is checked.
    l6.add(T(0));

    // ∇_l R_ijkl = ∇_j R_ik − ∇_i R_jk = 0, leaving R_ijkl f_l = 0.
    T worst7(0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          T s(0);
          for (int l = 0; l < 4; ++l) s += p.rm(i, j, k, l) * p.grad_f[static_cast<std::size_t>(l)];
          if (worst7 < abs_value(s)) worst7 = abs_value(s);
        }
    l7.add(worst7);
  }
  std::vector<IdentityReport> out{soliton.finish(), l1.finish(), l2.finish(), l3.finish(),
                                  l4.finish(),      l5.finish(), l6.finish(), l7.finish()};
  out[6].note = "consistency only: the Rm*Rm contraction has no fixed coefficients";
  return out;
}

template <class T>
IdentityReport weitzenbock_residual(ModelId id, Duality duality) {
  const Point4<T> x = sample_points<T>(id, 1, 1)[0];
  const ModelPoint<T> p = model_data(id, x);
  const CurvDecomp<T> d = weyl_decompose(p.rm);
  const Block3<T>& w = d.weyl(duality);
  const T residual = T(2) * w.frobenius_sq() - T(36) * w.determinant() -
                     block_inner(kn_square_block(d, duality), w);
  Accumulator<T> acc(duality == Duality::self_dual ? "weitzenbock_plus" : "weitzenbock_minus");
  acc.add(residual);
  return acc.finish();
}

AsymptoticsReport potential_asymptotics(ModelId id, const std::vector<double>& radii,
                                        double c_max, double c_step) {
  if (model_info(id).compact)
    throw Error(ErrorCode::CompactModel,
                std::string(model_info(id).name) + " is compact; the potential has no asymptotics");
  if (radii.empty() || !(c_step > 0) || c_max < 0)
    throw Error(ErrorCode::InvalidArgument, "need radii, c_step > 0 and c_max >= 0");

  // (r, f) pairs.  Distances are measured from a minimum point of f; on the
  // cylinders the compact factor contributes a bounded part d ≤ diameter.
  std::vector<std::pair<double, double>> samples;
  const double diameter = id == ModelId::cylinder_s2xr2   ? std::numbers::pi * std::sqrt(2.0)
                          : id == ModelId::cylinder_s3xr ? 2.0 * std::numbers::pi
                                                          : 0.0;
  for (double r : radii) {
    if (r < 0) throw Error(ErrorCode::InvalidArgument, "radii must be non-negative");
    if (id == ModelId::gaussian_r4) {
      samples.emplace_back(r, r * r / 4.0);
      continue;
    }
    const double dmax = std::min(r, diameter);
    for (int k = 0; k <= 4; ++k) {
      const double d = dmax * k / 4.0;
      const double flat_sq = std::max(0.0, r * r - d * d);
      const double f = id == ModelId::cylinder_s2xr2 ? flat_sq / 4.0 + 1.0 : flat_sq / 4.0 + 1.5;
      samples.emplace_back(r, f);
    }
  }

  AsymptoticsReport rep;
  rep.r0 = *std::min_element(radii.begin(), radii.end());
  rep.samples = samples.size();
  for (const auto& [r, f] : samples) rep.c_needed = std::max(rep.c_needed, std::fabs(r - 2.0 * std::sqrt(f)));

  auto holds_at = [&](double c) {
    for (const auto& [r, f] : samples) {
      const double slack = 1e-12 * (1.0 + f);
      if (0.25 * (r - c) * (r - c) > f + slack || f > 0.25 * (r + c) * (r + c) + slack) return false;
    }
    return true;
  };
  const auto steps = static_cast<long>(std::floor(c_max / c_step + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double c = static_cast<double>(k) * c_step;
    if (holds_at(c)) {
      rep.c_found = c;
      rep.holds = true;
      break;
    }
  }
  return rep;
}

Matrix4Array chart_metric(ModelId id, const Point& x) {
  Matrix4Array g{};
  switch (id) {
    case ModelId::gaussian_r4:
      for (std::size_t i = 0; i < 4; ++i) g[i][i] = 1.0;
      break;
    case ModelId::round_s4: {
      // stereographic chart of the sphere of radius a: 4a⁴/(a² + |x|²)² δ
      const double a2 = 6.0;
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
      const double c = 4.0 * a2 * a2 / ((a2 + r2) * (a2 + r2));
      for (std::size_t i = 0; i < 4; ++i) g[i][i] = c;
      break;
    }
    case ModelId::cylinder_s3xr: {
      const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
      g[0][0] = 4.0;
      g[1][1] = 4.0 * s1 * s1;
      g[2][2] = 4.0 * s1 * s1 * s2 * s2;
      g[3][3] = 1.0;
      break;
    }
    case ModelId::cylinder_s2xr2: {
      const double s = std::sin(x[0]);
      g[0][0] = 2.0;
      g[1][1] = 2.0 * s * s;
      g[2][2] = g[3][3] = 1.0;
      break;
    }
    case ModelId::cp2_fubini_study: {
      // 12 Re h with h_jk̄ = ((1+|z|²)δ_jk − z̄_j z_k)/(1+|z|²)²
      const std::array<std::complex<double>, 2> z{std::complex<double>(x[0], x[1]),
                                                  std::complex<double>(x[2], x[3])};
      const double n = 1.0 + std::norm(z[0]) + std::norm(z[1]);
      auto h = [&](std::size_t j, std::size_t k) {
        return ((j == k ? n : 0.0) - std::conj(z[j]) * z[k]) / (n * n);
      };
      // ∂_{x_{2j}} ↔ e_j, ∂_{x_{2j+1}} ↔ i e_j
      auto tangent = [](std::size_t a) {
        std::array<std::complex<double>, 2> u{};
        u[a / 2] = a % 2 == 0 ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
        return u;
      };
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
          const auto u = tangent(a), v = tangent(b);
          std::complex<double> s = 0;
          for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) s += h(j, k) * u[j] * std::conj(v[k]);
          g[a][b] = 12.0 * s.real();
        }
      break;
    }
  }
  return g;
}

double chart_potential(ModelId id, const Point& x) {
  switch (id) {
    case ModelId::gaussian_r4:
      return (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) / 4.0;
    case ModelId::cylinder_s3xr:
      return x[3] * x[3] / 4.0 + 1.5;
    case ModelId::cylinder_s2xr2:
      return (x[2] * x[2] + x[3] * x[3]) / 4.0 + 1.0;
    case ModelId::round_s4:
    case ModelId::cp2_fubini_study:
      return 2.0;
  }
  return 0.0;
}

std::array<Axis, 4> chart_box(ModelId id, double h, std::size_t count) {
  Point centre{};
  switch (id) {
    case ModelId::gaussian_r4: centre = {0.3, -0.2, 0.5, 0.1}; break;
    case ModelId::round_s4: centre = {0.4, -0.3, 0.2, 0.5}; break;
    case ModelId::cylinder_s3xr: centre = {1.1, 0.9, 0.5, 0.6}; break;
    case ModelId::cylinder_s2xr2: centre = {1.2, 0.4, 0.7, -0.3}; break;
    case ModelId::cp2_fubini_study: centre = {0.3, 0.2, -0.4, 0.1}; break;
  }
  const double half_width = h * static_cast<double>(count - 1) / 2.0;
  std::array<Axis, 4> axes{};
  for (std::size_t a = 0; a < 4; ++a)
    axes[a] = Axis{centre[a] - half_width, centre[a] + half_width, count};
  return axes;
}

MetricChart export_chart(ModelId id, const std::array<Axis, 4>& axes) {
  return MetricChart::sample(
      axes, [id](const Point& x) { return chart_metric(id, x); },
      [id](const Point& x) { return chart_potential(id, x); });
}

#define CURV4_INSTANTIATE(T)                                                                  \
  template ModelPoint<T> model_data(ModelId, const Point4<T>&);                               \
  template std::vector<Point4<T>> sample_points(ModelId, std::size_t, std::uint64_t);         \
  template std::vector<IdentityReport> verify_hamilton_identities(ModelId,                    \
                                                                  const std::vector<Point4<T>>&); \
  template IdentityReport weitzenbock_residual<T>(ModelId, Duality);

CURV4_INSTANTIATE(double)
CURV4_INSTANTIATE(Rational)

#undef CURV4_INSTANTIATE

}  // namespace curv4
