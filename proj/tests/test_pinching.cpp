#include "curv4/pinching.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace curv4;
using Q = Rational;

namespace {

AlgCurvTensor<Q> product(const Q& k1, const Q& k2) {
  // S²(K=k1) on axes 0,1 times S²(K=k2) on axes 2,3
  auto a = oracle::space_form<Q>(k1, {true, true, false, false});
  const auto b = oracle::space_form<Q>(k2, {false, false, true, true});
  for (std::size_t q = 0; q < 256; ++q) a[q] += b[q];
  return AlgCurvTensor<Q>::from_components(a);
}

const AlgCurvTensor<Q> kS2xR2 = product(Q(1, 2), Q(0));

AlgCurvTensor<Q> s3xr() {
  return AlgCurvTensor<Q>::from_components(oracle::space_form<Q>(Q(1, 4), {true, true, true, false}));
}

// ½ Ric⊙g − (R/12) g⊙g for a given Ricci tensor: Weyl-free by construction.
template <class T>
AlgCurvTensor<T> weyl_free(const oracle::Mat<T>& ric) {
  const auto g = oracle::identity<T>();
  T scalar(0);
  for (std::size_t i = 0; i < 4; ++i) scalar += ric[i][i];
  const auto a = oracle::kn(ric, g), b = oracle::kn(g, g);
  oracle::Comp<T> c{};
  for (std::size_t q = 0; q < 256; ++q) c[q] = a[q] / T(2) - scalar / T(12) * b[q];
  return AlgCurvTensor<T>::from_components(c);
}

SymBilinear4<double> rotated_diag(const std::array<double, 4>& d, double angle) {
  // Q diag Qᵀ with Q a product of rotations in the (0,2) and (1,3) planes
  const double c = std::cos(angle), s = std::sin(angle);
  std::array<std::array<double, 4>, 4> r{{{c, 0, -s, 0}, {0, c, 0, -s}, {s, 0, c, 0}, {0, s, 0, c}}};
  const double c2 = std::cos(0.3), s2 = std::sin(0.3);
  std::array<std::array<double, 4>, 4> t{{{c2, -s2, 0, 0}, {s2, c2, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  std::array<std::array<double, 4>, 4> q{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) q[i][j] += r[i][k] * t[k][j];
  std::array<std::array<double, 4>, 4> m{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) m[i][j] += q[i][k] * d[k] * q[j][k];
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) m[j][i] = m[i][j];
  return SymBilinear4<double>::from_matrix(m);
}

}  // namespace

TEST_CASE("spectral inequalities on the printed spectra") {
  SUBCASE("two equal eigenvalues: equality in both") {
    const auto [a, b] = check_prop21(Spectrum3<Surd>::ordered(-1, -1, 2));
    CHECK(a.exact);
    CHECK(a.lhs_exact == "6");
    CHECK(a.rhs_exact == "6");
    CHECK(a.margin_exact == "0");
    CHECK(a.equality_flag);
    CHECK(b.lhs_exact == "2");
    CHECK(b.rhs_exact == "2");
    CHECK(b.margin_exact == "0");
    CHECK(b.equality_flag);
    CHECK(a.equality_diagnosis == "w1==w2");
    REQUIRE(b.rhs_outer);
    CHECK(*b.rhs_outer == doctest::Approx(2.0));
  }
  SUBCASE("zero spectrum") {
    const auto [a, b] = check_prop21(Spectrum3<double>{0, 0, 0});
    CHECK(a.satisfied);
    CHECK(a.equality_flag);
    CHECK(b.equality_flag);
  }
  SUBCASE("strict") {
    const auto [a, b] = check_prop21(Spectrum3<Surd>::ordered(-2, 1, 1));
    CHECK(a.lhs == doctest::Approx(1.5));
    CHECK(a.rhs == doctest::Approx(6));
    CHECK(a.satisfied);
    CHECK_FALSE(a.equality_flag);
    CHECK(b.lhs == doctest::Approx(-2));
    CHECK(b.rhs == doctest::Approx(1));
    CHECK_FALSE(b.equality_flag);
    CHECK(a.equality_diagnosis.empty());
  }
  SUBCASE("trace must vanish") {
    CHECK_THROWS_AS(check_prop21(Spectrum3<double>{0, 0, 1}), Error);
  }
}

TEST_CASE("spectral equality detector") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = u(rng);
    const auto [a, b] = check_prop21(Spectrum3<double>::sorted(-x, -x, 2 * x));
    CHECK(a.equality_flag);
    CHECK(b.equality_flag);
    CHECK(a.margin >= -1e-12);
    CHECK(b.margin >= -1e-12);
    const auto [pa, pb] = check_prop21(Spectrum3<double>::sorted(-x - 1e-3, -x + 1e-3, 2 * x));
    CHECK_FALSE(pa.equality_flag);
    CHECK_FALSE(pb.equality_flag);
    CHECK(pa.equality_diagnosis.empty());
  }
}

TEST_CASE("random trace-free spectra never violate the bounds") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100000; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), m = (a + b + c) / 3;
    const auto s = Spectrum3<double>::sorted(a - m, b - m, c - m);
    const auto [ra, rb] = check_prop21(s);
    CHECK(ra.margin >= -1e-12);
    CHECK(rb.margin >= -1e-12);
    CHECK(ra.equality_flag == (std::fabs(s.w1 - s.w2) <= 1e-9 || ra.margin <= 1e-9));
  }
}

TEST_CASE("Kulkarni-Nomizu square bound") {
  SUBCASE("equality family") {
    const auto [a, b] = check_prop22(SymBilinear4<Q>::diagonal({Q(1, 4), Q(1, 4), Q(-1, 4), Q(-1, 4)}));
    CHECK(a.lhs_exact == "3/8");
    CHECK(a.rhs_exact == "3/8");
    CHECK(a.margin_exact == "0");
    CHECK(a.equality_flag);
    CHECK(a.equality_diagnosis == "4|Ric0^2|^2==|Ric0|^4");
    CHECK(b.satisfied);
  }
  SUBCASE("zero") {
    const auto [a, b] = check_prop22(SymBilinear4<Q>());
    CHECK(a.equality_flag);
    CHECK(b.equality_flag);
  }
  SUBCASE("strict for diag(3,-1,-1,-1)") {
    for (int t : {1, 2, -3, 7}) {
      const auto r = SymBilinear4<Q>::diagonal({Q(3 * t), Q(-t), Q(-t), Q(-t)});
      const auto [a, b] = check_prop22(r);
      // 8 Σ_{i≠j} λi²λj² = 8 t⁴ (6·9 + 6) and 6 (12 t²)²
      CHECK(a.lhs_exact == Q(480 * t * t * t * t).str());
      CHECK(a.rhs_exact == Q(864 * t * t * t * t).str());
      CHECK_FALSE(a.equality_flag);
      CHECK(a.equality_diagnosis.empty());
      CHECK(b.satisfied);
    }
  }
  SUBCASE("rotated equality family and its perturbations") {
    for (double a : {0.25, 0.7, 1.3}) {
      for (double angle : {0.0, 0.4, 1.9}) {
        const auto [ea, eb] = check_prop22(rotated_diag({a, a, -a, -a}, angle));
        CHECK(ea.equality_flag);
        CHECK(std::fabs(ea.margin) <= 1e-9);
        CHECK(eb.satisfied);
        const auto [pa, pb] = check_prop22(rotated_diag({a + 1e-3, a - 1e-3, -a, -a}, angle));
        CHECK_FALSE(pa.equality_flag);
        CHECK(pa.equality_diagnosis.empty());
        CHECK(pa.margin > 1e-9);
      }
    }
  }
  SUBCASE("equality characterization on random inputs") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20000; ++trial) {
      const auto r = random_traceless_symmetric(rng);
      const auto [a, b] = check_prop22(r);
      CHECK(a.margin >= -1e-12);
      CHECK(b.margin >= -1e-12);
      const double s = r.norm_sq(), sq = r.squared().norm_sq();
      CHECK((std::fabs(4 * sq - s * s) <= 1e-9) == (a.margin <= 1e-9));
    }
  }
  SUBCASE("trace must vanish") {
    try {
      check_prop22(SymBilinear4<double>::diagonal({1, 0, 0, 0}));
      FAIL("expected NotTraceFree");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotTraceFree);
    }
  }
}

TEST_CASE("self-dual pinching on the rigidity list") {
  SUBCASE("sphere-plane product attains equality") {
    const auto r = check_theorem1(weyl_decompose(kS2xR2), Duality::self_dual);
    CHECK(r.lhs_exact == "1/48");
    CHECK(r.rhs_exact == "1/48");
    CHECK(r.margin_exact == "0");
    CHECK(r.satisfied);
    CHECK(r.equality_flag);
  }
  SUBCASE("flat space") {
    const auto r = check_theorem1(weyl_decompose(AlgCurvTensor<Q>()), Duality::self_dual);
    CHECK(r.margin_exact == "0");
    CHECK(r.equality_diagnosis == "W==0");
  }
  SUBCASE("three-sphere cylinder") {
    const auto d = weyl_decompose(s3xr());
    for (Duality du : {Duality::self_dual, Duality::anti_self_dual}) {
      const auto r = check_theorem1(d, du);
      CHECK(r.lhs_exact == "0");
      CHECK(r.rhs_exact == "0");
      CHECK(r.equality_flag);
    }
  }
}

TEST_CASE("self-dual pinching scales with the curvature") {
  const auto base = product(Q(1, 2), Q(1, 3));
  const auto d1 = weyl_decompose(base);
  const auto r1 = check_theorem1(d1, Duality::self_dual);
  const Q n2 = d1.weyl_plus.frobenius_sq();
  REQUIRE(n2 != 0);
  // rhs(1) as an exact value: ½⟨(R̊⊙R̊)⁺, W⁺⟩ is rational
  const Q rhs1 = block_inner(kn_square_block(d1, Duality::self_dual), d1.weyl_plus) / 2;
  CHECK(r1.rhs_exact == rhs1.str());
  for (const Q& t : {Q(2), Q(1, 3), Q(7, 5)}) {
    const auto r = check_theorem1(weyl_decompose(t * base), Duality::self_dual);
    const Surd expected_lhs = Surd(t * t * n2) - Surd(t * t * t) * Surd::sqrt_of(6 * n2) * Surd(n2);
    CHECK(r.lhs_exact == expected_lhs.str());
    CHECK(r.rhs_exact == Q(t * t * t * rhs1).str());
  }
}

TEST_CASE("Weyl-free curvature gives zero on both sides") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> u(-20, 20);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::Mat<Q> ric{};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) ric[i][j] = ric[j][i] = Q(u(rng), 8);
    const auto d = weyl_decompose(weyl_free(ric));
    for (Duality du : {Duality::self_dual, Duality::anti_self_dual}) {
      const auto r = check_theorem1(d, du);
      CHECK(r.lhs_exact == "0");
      CHECK(r.rhs_exact == "0");
    }
  }
  std::uniform_real_distribution<double> v(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::Mat<double> ric{};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) ric[i][j] = ric[j][i] = v(rng);
    const auto r = check_theorem1(weyl_decompose(weyl_free(ric)), Duality::self_dual);
    CHECK(std::fabs(r.lhs) <= 1e-14);
    CHECK(std::fabs(r.rhs) <= 1e-14);
    CHECK(r.equality_diagnosis == "W==0");
  }
}

TEST_CASE("scalar-curvature pinching conditions") {
  SUBCASE("three-sphere cylinder attains equality") {
    const auto [c12, c13] = check_catino(weyl_decompose(s3xr()), Q(2));
    CHECK(c12.margin_exact == "0");
    CHECK(c12.equality_flag);
    CHECK(c12.satisfied);
    CHECK(c13.margin_exact == "0");
  }
  SUBCASE("sphere-plane product fails") {
    const auto [c12, c13] = check_catino(weyl_decompose(kS2xR2), Q(2));
    CHECK(c12.lhs == doctest::Approx(1 / std::sqrt(12.0)).epsilon(1e-12));
    CHECK(c12.rhs == doctest::Approx(std::sqrt(3.0) * std::pow(0.5 - 1 / (2 * std::sqrt(3.0)), 2)).epsilon(1e-12));
    CHECK_FALSE(c12.satisfied);
    CHECK(c12.lhs_exact == "1/6*sqrt(3)");
  }
  SUBCASE("flat space") {
    const auto [c12, c13] = check_catino(weyl_decompose(AlgCurvTensor<double>()), 1.5);
    CHECK(c12.satisfied);
    CHECK(c13.satisfied);
    CHECK(c13.note.empty());
  }
  SUBCASE("out-of-range gamma is flagged") {
    const auto [c12, c13] = check_catino(weyl_decompose(AlgCurvTensor<double>()), 3.0);
    CHECK_FALSE(c13.note.empty());
  }
}

TEST_CASE("bound on the mixed term") {
  SUBCASE("sphere-plane product ratio") {
    const auto rm = AlgCurvTensor<double>::from_components(oracle::space_form<double>(0.5, {true, true, false, false}));
    const auto r = check_remark14(weyl_decompose(rm));
    REQUIRE(r.ratio);
    CHECK(std::fabs(*r.ratio - std::sqrt(6.0) / 3) <= 1e-12);
    CHECK(r.satisfied);
    const auto exact = check_remark14(weyl_decompose(kS2xR2));
    CHECK(exact.lhs_exact == "1/24");
  }
  SUBCASE("zero Weyl block") {
    const auto r = check_remark14(weyl_decompose(s3xr()));
    CHECK(r.margin_exact == "0");
    CHECK_FALSE(r.ratio);
  }
  SUBCASE("raw evaluation agrees with the decomposition") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      const auto d = weyl_decompose(AlgCurvTensor<double>::from_components(oracle::random_curvature(rng)));
      const auto a = check_remark14(d);
      const auto b = check_remark14(d.traceless_ricci, d.weyl_plus, 1);
      CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-12));
      CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-12));
      CHECK(a.margin >= -1e-12);
    }
  }
}

TEST_CASE("fuzzing is deterministic and clean") {
  FuzzOptions one;
  one.threads = 1;
  FuzzOptions many;
  many.threads = 5;
  const auto a = fuzz_inequalities(100000, 42, one);
  const auto b = fuzz_inequalities(100000, 42, many);
  const auto c = fuzz_inequalities(100000, 42, many);
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a.trials == 100000);
  CHECK(a.violations == 0);
  CHECK(a.worst_margin >= -1e-12);
  const auto d = fuzz_inequalities(100000, 43, one);
  CHECK(d.worst_margin != a.worst_margin);

  FuzzOptions strict = one;
  strict.violation_tol = -1e9;  // every margin counts as a violation
  CHECK(fuzz_inequalities(1000, 1, strict).violations == 5000);

  try {
    fuzz_inequalities(0, 1);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}
