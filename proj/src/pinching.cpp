#include "curv4/pinching.hpp"

#include <cmath>

namespace curv4 {

std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::prop21a: return "prop21a";
    case ConditionId::prop21b: return "prop21b";
    case ConditionId::prop22a: return "prop22a";
    case ConditionId::prop22b: return "prop22b";
    case ConditionId::thm1_plus: return "thm1_plus";
    case ConditionId::thm1_minus: return "thm1_minus";
    case ConditionId::catino_12: return "catino_12";
    case ConditionId::catino_13: return "catino_13";
    case ConditionId::remark_14: return "remark_14";
  }
  return "unknown";
}

namespace {

// Arithmetic in which the reports are evaluated: double for floating inputs,
// Surd for exact rational inputs.
template <class T>
struct NumFor {
  using type = double;
};
template <>
struct NumFor<Rational> {
  using type = Surd;
};
template <class T>
using NumFor_t = typename NumFor<T>::type;

double num_sqrt(double x) { return std::sqrt(x); }
Surd num_sqrt(const Surd& x) { return sqrt(x); }
double num_abs(double x) { return std::fabs(x); }
Surd num_abs(const Surd& x) { return abs(x); }
bool within(double x, double tol) { return std::fabs(x) <= tol; }
bool within(const Surd& x, double) { return x.is_zero(); }
template <class Num>
Num num_min(const Num& a, const Num& b) {
  return b < a ? b : a;
}

Surd lift(const Rational& x) { return Surd(x); }
double lift(double x) { return x; }

template <class Num>
Num ratio(long p, long q) {
  if constexpr (std::is_same_v<Num, Surd>) {
    return Surd(Rational(p, q));
  } else {
    return static_cast<double>(p) / static_cast<double>(q);
  }
}

template <class Num>
PinchReport make_report(ConditionId id, const Num& lhs, const Num& rhs, const Num& margin) {
  PinchReport r;
  r.id = id;
  r.lhs = to_double(lhs);
  r.rhs = to_double(rhs);
  r.margin = to_double(margin);
  if constexpr (std::is_same_v<Num, Surd>) {
    r.exact = true;
    r.tolerance = 0;
    r.satisfied = margin.sign() >= 0;
    r.equality_flag = margin.is_zero();
    r.lhs_exact = lhs.str();
    r.rhs_exact = rhs.str();
    r.margin_exact = margin.str();
  } else {
    r.tolerance = tol::kEq;
    r.satisfied = margin >= -tol::kEq;
    r.equality_flag = std::fabs(margin) <= tol::kEq;
  }
  return r;
}

template <class Num>
std::pair<PinchReport, PinchReport> prop21_impl(const Spectrum3<Num>& s) {
  if (!within(s.sum(), tol::kAbs))
    throw Error(ErrorCode::TraceNotZero, "spectrum does not sum to zero");
  const Num n2 = s.sum_sq();
  const Num w3 = s.w3;
  const bool pair_equal = within(Num(s.w2 - s.w1), tol::kEq);
  const char* diagnosis = pair_equal ? "w1==w2" : "";

  const Num lhs_a = ratio<Num>(3, 2) * w3 * w3;
  PinchReport a = make_report(ConditionId::prop21a, lhs_a, n2, Num(n2 - lhs_a));
  a.equality_diagnosis = diagnosis;

  const Num det = s.product();
  const Num middle = ratio<Num>(1, 6) * w3 * n2;
  const Num outer = ratio<Num>(1, 18) * n2 * num_sqrt(Num(Num(6) * n2));
  const Num margin = num_min(Num(middle - det), Num(outer - middle));
  PinchReport b = make_report(ConditionId::prop21b, det, middle, margin);
  b.rhs_outer = to_double(outer);
  b.equality_diagnosis = diagnosis;
  return {a, b};
}

}  // namespace

std::pair<PinchReport, PinchReport> check_prop21(const Spectrum3<double>& s) {
  return prop21_impl(s);
}

std::pair<PinchReport, PinchReport> check_prop21(const Spectrum3<Surd>& s) {
  return prop21_impl(s);
}

template <class T>
std::pair<PinchReport, PinchReport> check_prop22(const SymBilinear4<T>& ric0, int orientation) {
  using Num = NumFor_t<T>;
  if (abs_value(ric0.trace()) > ScalarTraits<T>::tol_abs())
    throw Error(ErrorCode::NotTraceFree, "traceless Ricci tensor has non-zero trace");

  const T s = ric0.norm_sq();
  const Num bound = lift(T(T(6) * s * s));

  const AlgCurvTensor<T> kn = kulkarni_nomizu(ric0, ric0).with_orientation(orientation);
  const Num comps = lift(kn.component_norm_sq());
  PinchReport a = make_report(ConditionId::prop22a, comps, bound, Num(bound - comps));
  const T sq = ric0.squared().norm_sq();
  if (within(lift(T(T(4) * sq - s * s)), tol::kEq)) a.equality_diagnosis = "4|Ric0^2|^2==|Ric0|^4";

  const Lambda2Operator<T> op = as_lambda2_operator(kn);
  const Num plus = lift(T(T(4) * op.block(Duality::self_dual).frobenius_sq()));
  PinchReport b = make_report(ConditionId::prop22b, plus, bound, Num(bound - plus));
  if (within(lift(op.block(Duality::anti_self_dual).frobenius_sq()), tol::kEq))
    b.equality_diagnosis = "(Ric0*Ric0)^-==0";
  return {a, b};
}

template <class T>
std::pair<PinchReport, PinchReport> check_prop22(const CurvDecomp<T>& d) {
  return check_prop22(d.traceless_ricci, d.orientation);
}

template <class T>
PinchReport check_theorem1(const CurvDecomp<T>& d, Duality duality) {
  using Num = NumFor_t<T>;
  const Block3<T>& w = d.weyl(duality);
  const Num n2 = lift(w.frobenius_sq());
  const Num lhs = n2 - n2 * num_sqrt(Num(Num(6) * n2));
  const Num rhs = lift(T(block_inner(kn_square_block(d, duality), w) / T(2)));
  PinchReport r = make_report(duality == Duality::self_dual ? ConditionId::thm1_plus
                                                            : ConditionId::thm1_minus,
                              lhs, rhs, Num(lhs - rhs));
  if (within(n2, tol::kEq))
    r.equality_diagnosis = "W==0";
  else if (r.equality_flag)
    r.equality_diagnosis = "equality";
  return r;
}

template <class T>
std::pair<PinchReport, PinchReport> check_catino(const CurvDecomp<T>& d, const T& gamma) {
  using Num = NumFor_t<T>;
  const BlockNorms<T> n = block_norms(d);
  const Num w = num_sqrt(lift(T(n.weyl_plus_sq + n.weyl_minus_sq)));
  const Num scalar = lift(n.scalar);
  const Num ric0 = num_sqrt(lift(n.traceless_ricci_sq));
  const Num root3 = num_sqrt(Num(3));
  // |R̊ic| − R/(2√3), with 1/(2√3) = √3/6
  const Num gap = ric0 - ratio<Num>(1, 6) * scalar * root3;

  const Num lhs12 = w * scalar;
  const Num rhs12 = root3 * gap * gap;
  PinchReport c12 = make_report(ConditionId::catino_12, lhs12, rhs12, Num(rhs12 - lhs12));

  const Num g = lift(gamma);
  const Num rhs13 = g * num_abs(gap);
  PinchReport c13 = make_report(ConditionId::catino_13, w, rhs13, Num(rhs13 - w));
  if (!(g < Num(Num(1) + root3)))
    c13.note = "gamma >= 1+sqrt(3): outside the range where the condition is meaningful";
  return {c12, c13};
}

template <class T>
PinchReport check_remark14(const CurvDecomp<T>& d, Duality duality) {
  using Num = NumFor_t<T>;
  const Block3<T>& w = d.weyl(duality);
  const Num lhs = lift(block_inner(kn_square_block(d, duality), w));
  const T s = d.traceless_ricci.norm_sq();
  const T n2 = w.frobenius_sq();
  const Num rhs = lift(s) * num_sqrt(lift(T(T(6) * n2)));
  PinchReport r = make_report(ConditionId::remark_14, lhs, rhs, Num(rhs - lhs));
  const double denom = to_double(s) * std::sqrt(to_double(n2));
  if (denom > 0) r.ratio = r.lhs / denom;
  return r;
}

PinchReport check_remark14(const SymBilinear4<double>& ric0, const Block3<double>& weyl,
                           int orientation) {
  const Block3<double> kn = kn_square_block(ric0, orientation, weyl.duality());
  const double lhs = block_inner(kn, weyl);
  const double s = ric0.norm_sq();
  const double rhs = s * std::sqrt(6.0 * weyl.frobenius_sq());
  PinchReport r = make_report(ConditionId::remark_14, lhs, rhs, rhs - lhs);
  const double denom = s * std::sqrt(weyl.frobenius_sq());
  if (denom > 0) r.ratio = lhs / denom;
  return r;
}

#define CURV4_INSTANTIATE(T)                                                              \
  template std::pair<PinchReport, PinchReport> check_prop22(const SymBilinear4<T>&, int); \
  template std::pair<PinchReport, PinchReport> check_prop22(const CurvDecomp<T>&);        \
  template PinchReport check_theorem1(const CurvDecomp<T>&, Duality);                     \
  template std::pair<PinchReport, PinchReport> check_catino(const CurvDecomp<T>&, const T&); \
  template PinchReport check_remark14(const CurvDecomp<T>&, Duality);

CURV4_INSTANTIATE(double)
CURV4_INSTANTIATE(Rational)

#undef CURV4_INSTANTIATE

}  // namespace curv4
