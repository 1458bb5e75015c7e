#include "curv4/catalog.hpp"
#include "curv4/eigen3.hpp"
#include "curv4/pinching.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace curv4;
using Q = Rational;

namespace {

constexpr std::array<ModelId, 5> kAll{ModelId::gaussian_r4, ModelId::round_s4, ModelId::cylinder_s3xr,
                                      ModelId::cylinder_s2xr2, ModelId::cp2_fubini_study};

Point4<Q> generic_point(ModelId id) { return sample_points<Q>(id, 1, 7)[0]; }

oracle::Mat<Q> oracle_ricci(const AlgCurvTensor<Q>& rm) {
  oracle::Comp<Q> c;
  for (std::size_t q = 0; q < 256; ++q) c[q] = rm.components()[q];
  return oracle::ricci(c);
}

std::array<Surd, 3> spectrum(const Block3<Q>& b) {
  const auto s = exact_spectrum(b);
  REQUIRE(s);
  return {s->w1, s->w2, s->w3};
}

}  // namespace

TEST_CASE("model registry") {
  CHECK(models().size() == 5);
  for (const auto& m : models()) CHECK(parse_model(m.name) == m.id);
  CHECK(model_info(ModelId::round_s4).compact);
  CHECK(model_info(ModelId::cp2_fubini_study).compact);
  CHECK_FALSE(model_info(ModelId::cylinder_s2xr2).compact);
  try {
    parse_model("fik_shrinker");
    FAIL("expected UnknownModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownModel);
  }
}

TEST_CASE("pointwise data of each model") {
  SUBCASE("sphere-plane product") {
    const auto p = model_data<Q>(ModelId::cylinder_s2xr2, {Q(1), Q(2), Q(3), Q(-4)});
    CHECK(p.scalar == 1);
    CHECK(p.ricci(0, 0) == Q(1, 2));
    CHECK(p.ricci(1, 1) == Q(1, 2));
    CHECK(p.ricci(2, 2) == 0);
    CHECK(p.ricci(3, 3) == 0);
    CHECK(p.f == Q(25, 4) + 1);
    CHECK(p.grad_f[2] == Q(3, 2));
  }
  SUBCASE("Gaussian at the origin") {
    const auto p = model_data<Q>(ModelId::gaussian_r4, {0, 0, 0, 0});
    CHECK(p.rm.component_norm_sq() == 0);
    CHECK(p.f == 0);
    for (int i = 0; i < 4; ++i) CHECK(p.hess_f(i, i) == Q(1, 2));
  }
  SUBCASE("three-sphere cylinder") {
    const auto p = model_data<Q>(ModelId::cylinder_s3xr, {Q(1), Q(1), Q(1), Q(2)});
    CHECK(p.scalar == Q(3, 2));
    CHECK(p.f == Q(1) + Q(3, 2));
    for (int i = 0; i < 3; ++i) CHECK(p.ricci(i, i) == Q(1, 2));
    CHECK(p.ricci(3, 3) == 0);
  }
  SUBCASE("Einstein models") {
    for (ModelId id : {ModelId::round_s4, ModelId::cp2_fubini_study}) {
      const auto p = model_data<Q>(id, generic_point(id));
      CHECK(p.scalar == 2);
      CHECK(p.f == 2);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(p.ricci(i, j) == (i == j ? Q(1, 2) : Q(0)));
    }
  }
  SUBCASE("Ricci agrees with a direct contraction and scalar curvature is non-negative") {
    for (ModelId id : kAll) {
      for (const auto& x : sample_points<Q>(id, 20, 3)) {
        const auto p = model_data<Q>(id, x);
        const auto ric = oracle_ricci(p.rm);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) CHECK(p.ricci(i, j) == ric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        CHECK(p.scalar >= 0);
        CHECK(p.rm.symmetry_residual() == 0);
      }
    }
  }
  SUBCASE("outside the chart") {
    try {
      model_data<Q>(ModelId::cylinder_s2xr2, {Q(0), Q(1), Q(0), Q(0)});
      FAIL("expected PointOutOfDomain");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PointOutOfDomain);
    }
    CHECK_THROWS_AS(model_data<double>(ModelId::cylinder_s3xr, {1.0, 3.5, 0.0, 0.0}), Error);
  }
}

TEST_CASE("sample points are exact and inside the chart") {
  for (ModelId id : kAll) {
    const auto pts = sample_points<Q>(id, 100, 11);
    CHECK(pts.size() == 100);
    for (const auto& x : pts)
      for (const auto& c : x) CHECK(boost::multiprecision::denominator(Q(c * 1000)) == 1);
    CHECK(sample_points<Q>(id, 100, 11) == pts);
  }
}

TEST_CASE("soliton equation and identities vanish exactly") {
  for (ModelId id : kAll) {
    CAPTURE(model_info(id).name);
    const auto reports = verify_hamilton_identities<Q>(id, sample_points<Q>(id, 100, 5));
    REQUIRE(reports.size() == 8);
    const std::array<const char*, 8> names{"soliton_eq", "lem1_1", "lem1_2", "lem1_3",
                                           "lem1_4",     "lem1_5", "lem1_6", "lem1_7"};
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(reports[k].id == names[k]);
      CHECK(reports[k].points_checked == 100);
      CHECK(reports[k].exact);
      CHECK(reports[k].within_tolerance);
      CHECK(reports[k].max_residual_exact == "0");
    }
    CHECK_FALSE(reports[6].note.empty());
    for (const auto& r : verify_hamilton_identities<double>(id, sample_points<double>(id, 100, 5)))
      CHECK(r.max_residual <= 1e-12);
  }
}

TEST_CASE("the identities have content: a wrong potential breaks them") {
  // shifting f by a constant violates R + |∇f|² = f and nothing else
  const auto p = model_data<Q>(ModelId::cylinder_s2xr2, {Q(1), Q(1), Q(2), Q(0)});
  Q grad_sq = 0;
  for (const auto& g : p.grad_f) grad_sq += g * g;
  CHECK(p.scalar + grad_sq - p.f == 0);
  CHECK(p.scalar + grad_sq - (p.f + 1) != 0);
  // R − 2|Ric|² = 1 − 2·(¼ + ¼)
  CHECK(p.scalar - 2 * p.ricci.norm_sq() == 0);
}

TEST_CASE("Weyl blocks of the models") {
  SUBCASE("conformally flat models") {
    for (ModelId id : {ModelId::gaussian_r4, ModelId::round_s4, ModelId::cylinder_s3xr}) {
      const auto d = weyl_decompose(model_data<Q>(id, generic_point(id)).rm);
      CHECK(d.weyl_plus.frobenius_sq() == 0);
      CHECK(d.weyl_minus.frobenius_sq() == 0);
    }
  }
  SUBCASE("sphere-plane product") {
    const auto d = weyl_decompose(model_data<Q>(ModelId::cylinder_s2xr2, generic_point(ModelId::cylinder_s2xr2)).rm);
    for (Duality du : {Duality::self_dual, Duality::anti_self_dual}) {
      const auto s = spectrum(d.weyl(du));
      CHECK(s[0] == Surd(Q(-1, 12)));
      CHECK(s[1] == Surd(Q(-1, 12)));
      CHECK(s[2] == Surd(Q(1, 6)));
    }
  }
  SUBCASE("complex projective plane") {
    const auto d = weyl_decompose(model_data<Q>(ModelId::cp2_fubini_study, generic_point(ModelId::cp2_fubini_study)).rm);
    CHECK(d.weyl_minus.frobenius_sq() == 0);
    const auto s = spectrum(d.weyl_plus);
    CHECK(s[0] == Surd(Q(-1, 6)));
    CHECK(s[1] == Surd(Q(-1, 6)));
    CHECK(s[2] == Surd(Q(1, 3)));
    CHECK(d.traceless_ricci.norm_sq() == 0);
  }
}

TEST_CASE("reduced Weitzenbock identity") {
  for (ModelId id : kAll)
    for (Duality du : {Duality::self_dual, Duality::anti_self_dual}) {
      const auto r = weitzenbock_residual<Q>(id, du);
      CHECK(r.max_residual_exact == "0");
      CHECK(r.within_tolerance);
      CHECK(weitzenbock_residual<double>(id, du).max_residual <= 1e-12);
    }
  CHECK(weitzenbock_residual<Q>(ModelId::cylinder_s2xr2, Duality::self_dual).id == "weitzenbock_plus");
}

TEST_CASE("self-dual pinching holds with equality on the rigidity list") {
  for (ModelId id : {ModelId::gaussian_r4, ModelId::cylinder_s3xr, ModelId::cylinder_s2xr2}) {
    const auto r = check_theorem1(weyl_decompose(model_data<Q>(id, generic_point(id)).rm), Duality::self_dual);
    CHECK(r.margin_exact == "0");
    CHECK(r.equality_flag);
  }
  // the Kähler-Einstein model sits on the equality locus as well: |W⁺|² = √6|W⁺|³ and R̊ic = 0
  const auto cp2 = check_theorem1(
      weyl_decompose(model_data<Q>(ModelId::cp2_fubini_study, generic_point(ModelId::cp2_fubini_study)).rm),
      Duality::self_dual);
  CHECK(cp2.margin_exact == "0");
}

TEST_CASE("potential asymptotics") {
  std::vector<double> radii;
  for (int k = 0; k <= 200; ++k) radii.push_back(10.0 + 0.25 * k);
  SUBCASE("Gaussian is sharp") {
    const auto r = potential_asymptotics(ModelId::gaussian_r4, radii, 10, 0.01);
    CHECK(r.holds);
    REQUIRE(r.c_found);
    CHECK(*r.c_found == 0);
    CHECK(r.c_needed <= 1e-12);
  }
  SUBCASE("cylinders need a bounded constant") {
    for (ModelId id : {ModelId::cylinder_s2xr2, ModelId::cylinder_s3xr}) {
      const auto r = potential_asymptotics(id, radii, 10, 0.01);
      CHECK(r.holds);
      REQUIRE(r.c_found);
      CHECK(*r.c_found > 0);
      CHECK(*r.c_found < 10);
      CHECK(*r.c_found >= r.c_needed - 0.01 - 1e-9);
      CHECK_FALSE(potential_asymptotics(id, radii, r.c_needed * 0.5, 0.01).holds);
    }
  }
  SUBCASE("compact models have no asymptotics") {
    for (ModelId id : {ModelId::round_s4, ModelId::cp2_fubini_study}) {
      try {
        potential_asymptotics(id, radii, 10, 0.01);
        FAIL("expected CompactModel");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CompactModel);
      }
    }
  }
}

TEST_CASE("chart metrics") {
  for (ModelId id : kAll) {
    const auto axes = chart_box(id, 0.1);
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(axes[a].count == 5);
      CHECK(axes[a].step() == doctest::Approx(0.1));
    }
    const auto chart = export_chart(id, axes);
    CHECK(chart.potential_values().size() == 625);
  }
  // stereographic conformal factor at the origin: 4a⁴/a⁴
  CHECK(chart_metric(ModelId::round_s4, {0, 0, 0, 0})[0][0] == doctest::Approx(4.0));
  // 12 × Fubini-Study at the origin
  const auto g = chart_metric(ModelId::cp2_fubini_study, {0, 0, 0, 0});
  CHECK(g[0][0] == doctest::Approx(12.0));
  CHECK(g[0][1] == doctest::Approx(0.0));
}
