// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "curv4/catalog.hpp"
#include "curv4/chart_geometry.hpp"
#include "curv4/eigen3.hpp"
#include "curv4/pinching.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace curv4;
using Q = Rational;

namespace {

struct Criterion {
  int number;
  std::string title;
  double budget_s;
  std::function<bool(std::string&)> body;
};

// Collects failed sub-checks into a short message.
struct Checks {
  std::string& why;
  bool ok = true;
  void operator()(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!why.empty()) why += "; ";
      why += what;
    }
  }
};

AlgCurvTensor<Q> model_rm(ModelId id) { return model_data<Q>(id, sample_points<Q>(id, 1, 1)[0]).rm; }

bool golden(std::string& why) {
  Checks check{why};
  const auto d = weyl_decompose(model_rm(ModelId::cylinder_s2xr2));
  check(d.scalar == 1, "R");
  const std::array<Q, 4> ric{Q(1, 2), Q(1, 2), 0, 0};
  const std::array<Q, 4> ric0{Q(1, 4), Q(1, 4), Q(-1, 4), Q(-1, 4)};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      check(d.ricci(i, j) == (i == j ? ric[ui] : Q(0)), "Ric");
      check(d.traceless_ricci(i, j) == (i == j ? ric0[ui] : Q(0)), "traceless Ric");
    }
  for (Duality du : {Duality::self_dual, Duality::anti_self_dual}) {
    const auto s = exact_spectrum(d.weyl(du));
    check(s && s->w1 == Surd(Q(-1, 12)) && s->w2 == Surd(Q(-1, 12)) && s->w3 == Surd(Q(1, 6)), "W spectrum");
  }
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const bool quarter = (a == 0 || a == 3) && (b == 0 || b == 3);
      check(d.curvature_operator(a, b) == (quarter ? Q(1, 4) : Q(0)), "Rm matrix");
    }
  const auto kn = kulkarni_nomizu(d.traceless_ricci, d.traceless_ricci);
  check(kn.component_norm_sq() == Q(3, 8), "|Ric0 o Ric0|^2");
  const Lambda2Basis basis = Lambda2Basis::standard(1);
  for (int a : {0, 1}) {
    const auto image = act_on_two_form(kn, basis[a]);
    const Q factor = a == 0 ? Q(1, 8) : Q(-1, 8);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) check(image[i][j] == factor * basis[a][i][j], "KN action on w+");
  }
  const auto kp = kn_square_block(d, Duality::self_dual);
  Q sum = 0;
  const std::array<Q, 3> terms{Q(1, 48), Q(1, 96), Q(1, 96)};
  for (int i = 0; i < 3; ++i) {
    const Q t = kp(i, i) * d.weyl_plus(i, i);
    check(t == terms[static_cast<std::size_t>(i)], "diagonal products 1/48, 1/96, 1/96");
    sum += t;
  }
  check(sum == Q(1, 24) && block_inner(kp, d.weyl_plus) == Q(1, 24), "<(Ric0 o Ric0)+, W+> = 1/24");
  return check.ok;
}

bool rigidity(std::string& why) {
  Checks check{why};
  for (ModelId id : {ModelId::gaussian_r4, ModelId::cylinder_s3xr, ModelId::cylinder_s2xr2}) {
    const auto r = check_theorem1(weyl_decompose(model_rm(id)), Duality::self_dual);
    check(r.exact && r.margin_exact == "0", std::string(model_info(id).name) + " margin " + r.margin_exact);
  }
  const auto p = model_data<double>(ModelId::cylinder_s2xr2, {1.0, 0.5, 0.0, 0.0});
  const auto r = check_remark14(weyl_decompose(p.rm));
  check(r.ratio && std::fabs(*r.ratio - std::sqrt(6.0) / 3) <= 1e-12, "remark ratio");
  return check.ok;
}

bool hamilton(std::string& why) {
  Checks check{why};
  for (const auto& m : models()) {
    const auto reports = verify_hamilton_identities<Q>(m.id, sample_points<Q>(m.id, 100, 2024));
    for (const auto& r : reports) {
      if (r.id == "lem1_6") continue;
      check(r.points_checked >= 100 && r.max_residual_exact == "0", std::string(m.name) + " " + r.id);
    }
    for (Duality du : {Duality::self_dual, Duality::anti_self_dual}) {
      const auto w = weitzenbock_residual<Q>(m.id, du);
      check(w.max_residual_exact == "0", std::string(m.name) + " " + w.id);
    }
  }
  return check.ok;
}

bool fuzz(std::string& why) {
  Checks check{why};
  const FuzzSummary s = fuzz_inequalities(1'000'000, 42);
  check(s.trials == 1'000'000, "trial count");
  check(s.violations == 0, std::to_string(s.violations) + " violations");

  for (double x : {0.1, 0.5, 1.0, 3.0}) {
    const auto [a, b] = check_prop21(Spectrum3<double>::sorted(-x, -x, 2 * x));
    check(a.equality_flag && b.equality_flag, "w1 = w2 not detected");
    const auto [pa, pb] = check_prop21(Spectrum3<double>::sorted(-x - 1e-3, -x + 1e-3, 2 * x));
    check(!pa.equality_flag && !pb.equality_flag, "w1 = w2 + 2e-3 flagged");
    const auto [ea, eb] = check_prop22(SymBilinear4<double>::diagonal({x, x, -x, -x}));
    check(ea.equality_flag, "diag(a,a,-a,-a) not detected");
    const auto [qa, qb] = check_prop22(SymBilinear4<double>::diagonal({x + 1e-3, x - 1e-3, -x, -x}));
    check(!qa.equality_flag, "perturbed diag(a,a,-a,-a) flagged");
  }
  return check.ok;
}

double centre_error(ModelId id, double h) {
  const MetricChart chart = export_chart(id, chart_box(id, h));
  const ChartGeometry geo(chart);
  const std::size_t node = chart.flat({2, 2, 2, 2});
  const NodeCurvature nc = geo.frame_curvature(node);
  const Point x = chart.coords(node);
  const auto exact = model_data<double>(id, {x[0], x[1], x[2], x[3]});
  double err = 0;
  for (std::size_t q = 0; q < 256; ++q)
    err = std::max(err, std::fabs(nc.rm.components()[q] - exact.rm.components()[q]));
  return err;
}

bool finite_differences(std::string& why) {
  Checks check{why};
  for (const auto& [id, h] : {std::pair{ModelId::cylinder_s2xr2, 0.1}, std::pair{ModelId::round_s4, 0.2}}) {
    const double ratio = centre_error(id, h) / centre_error(id, h / 2);
    check(ratio >= 3.4 && ratio <= 4.6, std::string(model_info(id).name) + " ratio " + std::to_string(ratio));
  }
  const MetricChart chart = export_chart(ModelId::cylinder_s2xr2, chart_box(ModelId::cylinder_s2xr2, 0.02));
  const ChartGeometry geo(chart);
  const auto d = weyl_decompose(geo.frame_curvature(chart.flat({2, 2, 2, 2})).rm);
  const auto s = spectrum3(d.weyl_plus);
  const double err = std::max({std::fabs(s.w1 + 1.0 / 12), std::fabs(s.w2 + 1.0 / 12), std::fabs(s.w3 - 1.0 / 6)});
  check(err <= 1e-4, "W+ spectrum error " + std::to_string(err));
  return check.ok;
}

bool catino(std::string& why) {
  Checks check{why};
  const auto [s3, s3b] = check_catino(weyl_decompose(model_rm(ModelId::cylinder_s3xr)), Q(2));
  check(s3.margin_exact == "0" && s3.satisfied, "S3xR margin " + s3.margin_exact);
  const auto [s2, s2b] = check_catino(weyl_decompose(model_rm(ModelId::cylinder_s2xr2)), Q(2));
  check(!s2.satisfied, "S2xR2 satisfies the condition");
  check(std::fabs(s2.lhs - 0.2887) <= 1e-3 && std::fabs(s2.rhs - 0.0774) <= 1e-3,
        "S2xR2 lhs " + std::to_string(s2.lhs) + " rhs " + std::to_string(s2.rhs));
  return check.ok;
}

bool growth(std::string& why) {
  Checks check{why};
  for (ModelId id : {ModelId::gaussian_r4, ModelId::cylinder_s2xr2}) {
    const auto fit = fit_growth(export_chart(id, chart_box(id, 0.05, 9)));
    check(fit.feasible && fit.epsilon_hat <= 1e-9,
          std::string(model_info(id).name) + " epsilon " + std::to_string(fit.epsilon_hat));
  }
  // dx² + sech²x dy² + dz² + dw² has R = 2(2 sech²x − 1); take f = 2R.
  std::array<Axis, 4> axes{Axis{0.0, 0.8, 17}, Axis{-0.1, 0.1, 5}, Axis{-0.1, 0.1, 5}, Axis{-0.1, 0.1, 5}};
  const auto chart = MetricChart::sample(
      axes,
      [](const Point& x) {
        Matrix4Array g{};
        const double s = 1 / std::cosh(x[0]);
        g[0][0] = g[2][2] = g[3][3] = 1;
        g[1][1] = s * s;
        return g;
      },
      [](const Point& x) {
        const double s = 1 / std::cosh(x[0]);
        return 4 * (2 * s * s - 1);
      });
  const auto fit = fit_growth(chart);
  check(fit.feasible && std::fabs(fit.epsilon_hat - 0.5) <= 0.02, "synthetic epsilon " + std::to_string(fit.epsilon_hat));
  return check.ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact sphere-plane golden values", 1, golden},
      {2, "self-dual pinching equality on the rigidity list", 1, rigidity},
      {3, "soliton and Weitzenbock identities on all models", 5, hamilton},
      {4, "fuzzed inequalities and equality detection", 60, fuzz},
      {5, "finite-difference convergence and accuracy", 120, finite_differences},
      {6, "scalar pinching conditions on the cylinders", 1, catino},
      {7, "growth fit", 10, growth},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string why;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.body(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.budget_s) {
      ok = false;
      why = "over the " + std::to_string(c.budget_s) + " s budget";
    }
    std::printf("criterion %d  %s  %-50s %8.3f s%s%s\n", c.number, ok ? "PASS" : "FAIL", c.title.c_str(), secs,
                why.empty() ? "" : "  ", why.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
