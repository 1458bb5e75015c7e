#include "curv4/algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace curv4 {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::NotOrthonormalFrame: return "NotOrthonormalFrame";
    case ErrorCode::BasisNotOrthogonal: return "BasisNotOrthogonal";
    case ErrorCode::DualityMismatch: return "DualityMismatch";
    case ErrorCode::TraceNotZero: return "TraceNotZero";
    case ErrorCode::NotTraceFree: return "NotTraceFree";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::PointOutOfDomain: return "PointOutOfDomain";
    case ErrorCode::CompactModel: return "CompactModel";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::MetricNotPositiveDefinite: return "MetricNotPositiveDefinite";
    case ErrorCode::MissingPotential: return "MissingPotential";
    case ErrorCode::InexactValue: return "InexactValue";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::metric: return "metric";
    case Role::ricci: return "ricci";
    case Role::traceless_ricci: return "traceless_ricci";
    case Role::schouten: return "schouten";
    case Role::hessian: return "hessian";
    case Role::generic: return "generic";
  }
  return "generic";
}

std::string_view to_string(Duality d) {
  return d == Duality::self_dual ? "plus" : "minus";
}

Rational parse_rational(const std::string& text) {
  auto fail = [&] { throw Error(ErrorCode::ParseError, "not a number: '" + text + "'"); };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail();
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) --scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') fail();
    std::size_t used = 0;
    long exponent = 0;
    try {
      exponent = std::stol(text.substr(pos + 1), &used);
    } catch (const std::exception&) {
      fail();
    }
    if (pos + 1 + used != text.size() || std::labs(exponent) > 4000) fail();
    scale += exponent;
  }
  boost::multiprecision::mpz_int n(digits);
  boost::multiprecision::mpz_int p = boost::multiprecision::pow(
      boost::multiprecision::mpz_int(10), static_cast<unsigned>(std::labs(scale)));
  Rational r = scale >= 0 ? Rational(n * p) : Rational(n, p);
  return negative ? Rational(-r) : r;
}

// ---------------------------------------------------------------------------
// SymBilinear4

template <class T>
SymBilinear4<T> SymBilinear4<T>::from_matrix(const std::array<std::array<T, 4>, 4>& m,
                                             Role role) {
  SymBilinear4 out;
  const T tol = ScalarTraits<T>::tol_abs();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const T& a = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const T& b = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (abs_value(T(a - b)) > tol)
        throw Error(ErrorCode::NonSymmetricInput, "matrix is not symmetric");
      out.upper_[slot(i, j)] = a;
    }
  }
  out.role_ = role;
  out.check_role();
  return out;
}

template <class T>
SymBilinear4<T> SymBilinear4<T>::diagonal(const std::array<T, 4>& d, Role role) {
  SymBilinear4 out;
  for (int i = 0; i < 4; ++i) out.upper_[slot(i, i)] = d[static_cast<std::size_t>(i)];
  out.role_ = role;
  out.check_role();
  return out;
}

template <class T>
SymBilinear4<T> SymBilinear4<T>::with_role(Role role) const {
  SymBilinear4 out = *this;
  out.role_ = role;
  out.check_role();
  return out;
}

template <class T>
void SymBilinear4<T>::check_role() const {
  if (role_ == Role::metric && !is_positive_definite())
    throw Error(ErrorCode::DegenerateMetric, "metric is not positive definite");
  if (role_ == Role::traceless_ricci && abs_value(trace()) > ScalarTraits<T>::tol_abs())
    throw Error(ErrorCode::NotTraceFree, "traceless Ricci tensor has non-zero trace");
}

template <class T>
T SymBilinear4<T>::norm_sq() const {
  T s(0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += (*this)(i, j) * (*this)(i, j);
  return s;
}

template <class T>
SymBilinear4<T> SymBilinear4<T>::squared() const {
  SymBilinear4 out;
  for (int i = 0; i < 4; ++i) {
    for (int k = i; k < 4; ++k) {
      T s(0);
      for (int p = 0; p < 4; ++p) s += (*this)(i, p) * (*this)(k, p);
      out.upper_[slot(i, k)] = s;
    }
  }
  return out;
}

template <class T>
bool SymBilinear4<T>::is_identity() const {
  const T tol = ScalarTraits<T>::tol_abs();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (abs_value(T((*this)(i, j) - T(i == j ? 1 : 0))) > tol) return false;
  return true;
}

template <class T>
bool SymBilinear4<T>::is_positive_definite() const {
  // Sylvester's criterion via fraction-free elimination; exact for Rational.
  std::array<std::array<T, 4>, 4> a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (*this)(i, j);
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(a[k][k] > T(0))) return false;
    for (std::size_t i = k + 1; i < 4; ++i) {
      T factor = a[i][k] / a[k][k];
      for (std::size_t j = k; j < 4; ++j) a[i][j] -= factor * a[k][j];
    }
  }
  return true;
}

template <class T>
SymBilinear4<T>& SymBilinear4<T>::operator+=(const SymBilinear4& o) {
  for (std::size_t s = 0; s < 10; ++s) upper_[s] += o.upper_[s];
  role_ = Role::generic;
  return *this;
}

template <class T>
SymBilinear4<T>& SymBilinear4<T>::operator-=(const SymBilinear4& o) {
  for (std::size_t s = 0; s < 10; ++s) upper_[s] -= o.upper_[s];
  role_ = Role::generic;
  return *this;
}

template <class T>
SymBilinear4<T>& SymBilinear4<T>::operator*=(const T& v) {
  for (auto& x : upper_) x *= v;
  role_ = Role::generic;
  return *this;
}

// ---------------------------------------------------------------------------
// AlgCurvTensor

template <class T>
AlgCurvTensor<T> AlgCurvTensor<T>::raw(const Components& c, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorCode::InvalidArgument, "orientation must be +1 or -1");
  AlgCurvTensor out;
  out.c_ = c;
  out.orientation_ = orientation;
  return out;
}

template <class T>
AlgCurvTensor<T> AlgCurvTensor<T>::from_components(const Components& c, int orientation) {
  AlgCurvTensor out = raw(c, orientation);
  out.validate();
  return out;
}

template <class T>
AlgCurvTensor<T> AlgCurvTensor<T>::with_orientation(int orientation) const {
  return raw(c_, orientation);
}

template <class T>
T AlgCurvTensor<T>::symmetry_residual() const {
  T worst(0);
  auto update = [&](const T& v) {
    T a = abs_value(v);
    if (a > worst) worst = a;
  };
  const auto& r = *this;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          update(r(i, j, k, l) + r(j, i, k, l));
          update(r(i, j, k, l) + r(i, j, l, k));
          update(r(i, j, k, l) - r(k, l, i, j));
          update(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l));
        }
  return worst;
}

template <class T>
void AlgCurvTensor<T>::validate() const {
  if (symmetry_residual() > ScalarTraits<T>::tol_abs())
    throw Error(ErrorCode::NonSymmetricInput, "tensor violates curvature symmetries");
}

template <class T>
T AlgCurvTensor<T>::component_norm_sq() const {
  T s(0);
  for (const auto& x : c_) s += x * x;
  return s;
}

template <class T>
AlgCurvTensor<T>& AlgCurvTensor<T>::operator+=(const AlgCurvTensor& o) {
  for (std::size_t n = 0; n < 256; ++n) c_[n] += o.c_[n];
  return *this;
}

template <class T>
AlgCurvTensor<T>& AlgCurvTensor<T>::operator-=(const AlgCurvTensor& o) {
  for (std::size_t n = 0; n < 256; ++n) c_[n] -= o.c_[n];
  return *this;
}

template <class T>
AlgCurvTensor<T>& AlgCurvTensor<T>::operator*=(const T& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Bivectors and the Λ± basis

Bivector wedge(int p, int q) {
  Bivector b{};
  b[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = 1;
  b[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = -1;
  return b;
}

Bivector operator+(const Bivector& a, const Bivector& b) {
  Bivector out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i][j] = a[i][j] + b[i][j];
  return out;
}

Bivector operator-(const Bivector& a) {
  Bivector out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i][j] = -a[i][j];
  return out;
}

Bivector operator-(const Bivector& a, const Bivector& b) { return a + (-b); }

namespace {

int levi_civita(int i, int j, int k, int l) {
  std::array<int, 4> p{i, j, k, l};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[static_cast<std::size_t>(a)] == p[static_cast<std::size_t>(b)]) return 0;
  int sign = 1;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) sign = -sign;
  return sign;
}

}  // namespace

Bivector hodge_star(const Bivector& a, int orientation) {
  Bivector out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int s = 0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          s += levi_civita(i, j, k, l) * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      // s is even: each pair (k,l) is counted together with (l,k)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = orientation * s / 2;
    }
  return out;
}

int bivector_inner(const Bivector& a, const Bivector& b) {
  int s = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) s += a[i][j] * b[i][j];
  return s / 2;
}

Lambda2Basis::Lambda2Basis(const std::array<Bivector, 6>& v, int orientation)
    : v_(v), orientation_(orientation) {
  for (std::size_t a = 0; a < 6; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (int x = v_[a][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; x != 0)
          support_[a].push_back({i, j, x});
}

Lambda2Basis Lambda2Basis::standard(int orientation) {
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorCode::InvalidArgument, "orientation must be +1 or -1");
  const Bivector e12 = wedge(0, 1), e34 = wedge(2, 3), e13 = wedge(0, 2), e42 = wedge(3, 1),
                 e14 = wedge(0, 3), e23 = wedge(1, 2);
  std::array<Bivector, 3> plus{e12 + e34, e13 + e42, e14 + e23};
  std::array<Bivector, 3> minus{e12 - e34, e13 - e42, e14 - e23};
  if (orientation < 0) std::swap(plus, minus);
  return Lambda2Basis({plus[0], plus[1], plus[2], minus[0], minus[1], minus[2]}, orientation);
}

Lambda2Basis Lambda2Basis::from_bivectors(const std::array<Bivector, 6>& v, int orientation) {
  for (const auto& b : v)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (b[i][j] != -b[j][i])
          throw Error(ErrorCode::NonSymmetricInput, "bivector is not antisymmetric");
  return Lambda2Basis(v, orientation);
}

std::array<std::array<int, 6>, 6> Lambda2Basis::gram() const {
  std::array<std::array<int, 6>, 6> g{};
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) g[a][b] = bivector_inner(v_[a], v_[b]);
  return g;
}

bool Lambda2Basis::is_orthogonal() const {
  const auto g = gram();
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      if (g[a][b] != (a == b ? 2 : 0)) return false;
  return true;
}

template <class T>
Lambda2Basis hodge_projectors(const SymBilinear4<T>& metric, int orientation) {
  if (!metric.is_identity())
    throw Error(ErrorCode::NotOrthonormalFrame, "basis requires an orthonormal frame");
  return Lambda2Basis::standard(orientation);
}

template Lambda2Basis hodge_projectors(const SymBilinear4<double>&, int);
template Lambda2Basis hodge_projectors(const SymBilinear4<Rational>&, int);

// ---------------------------------------------------------------------------
// Block3 / Lambda2Operator

template <class T>
Block3<T>::Block3(const Matrix& m, Duality duality, BlockKind kind)
    : m_(m), duality_(duality), kind_(kind) {
  const T tol = ScalarTraits<T>::tol_abs();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (abs_value(T(m_[i][j] - m_[j][i])) > tol)
        throw Error(ErrorCode::NonSymmetricInput, "3x3 block is not symmetric");
  if (kind_ == BlockKind::weyl && abs_value(trace()) > tol)
    throw Error(ErrorCode::TraceNotZero, "Weyl block must be trace-free");
}

template <class T>
T Block3<T>::frobenius_sq() const {
  T s(0);
  for (const auto& row : m_)
    for (const auto& x : row) s += x * x;
  return s;
}

template <class T>
T Block3<T>::determinant() const {
  const auto& a = m_;
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

template <class T>
bool Block3<T>::is_diagonal() const {
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j && m_[i][j] != T(0)) return false;
  return true;
}

template <class T>
Lambda2Operator<T>::Lambda2Operator(const Matrix& m) : m_(m) {
  const T tol = ScalarTraits<T>::tol_abs();
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b)
      if (abs_value(T(m_[a][b] - m_[b][a])) > tol)
        throw Error(ErrorCode::NonSymmetricInput, "Λ² operator is not symmetric");
}

template <class T>
T Lambda2Operator<T>::trace() const {
  T s(0);
  for (std::size_t a = 0; a < 6; ++a) s += m_[a][a];
  return s;
}

template <class T>
T Lambda2Operator<T>::frobenius_sq() const {
  T s(0);
  for (const auto& row : m_)
    for (const auto& x : row) s += x * x;
  return s;
}

template <class T>
Block3<T> Lambda2Operator<T>::block(Duality d, BlockKind kind) const {
  const std::size_t off = d == Duality::self_dual ? 0 : 3;
  typename Block3<T>::Matrix b;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b[i][j] = m_[off + i][off + j];
  return Block3<T>(b, d, kind);
}

template <class T>
std::array<std::array<T, 3>, 3> Lambda2Operator<T>::off_diagonal() const {
  std::array<std::array<T, 3>, 3> b;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b[i][j] = m_[i][3 + j];
  return b;
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

template <class T>
std::array<std::array<T, 4>, 4> inverse4(const SymBilinear4<T>& g) {
  std::array<std::array<T, 8>, 4> a;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      a[i][j] = j < 4 ? g(static_cast<int>(i), static_cast<int>(j)) : T(j - 4 == i ? 1 : 0);
  for (std::size_t k = 0; k < 4; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < 4; ++i)
      if (abs_value(a[i][k]) > abs_value(a[pivot][k])) pivot = i;
    std::swap(a[k], a[pivot]);
    T inv = T(1) / a[k][k];
    for (auto& x : a[k]) x *= inv;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i == k) continue;
      T factor = a[i][k];
      for (std::size_t j = 0; j < 8; ++j) a[i][j] -= factor * a[k][j];
    }
  }
  std::array<std::array<T, 4>, 4> out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i][j] = a[i][j + 4];
  return out;
}

// Components in the frame e_a = E_ab ∂_b with E = g^{-1/2}.
AlgCurvTensor<double> to_orthonormal_frame(const AlgCurvTensor<double>& rm,
                                           const SymBilinear4<double>& g) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  Eigen::Matrix4d e = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();
  AlgCurvTensor<double>::Components out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                  s += e(a, i) * e(b, j) * e(c, k) * e(d, l) * rm(i, j, k, l);
          out[AlgCurvTensor<double>::index(a, b, c, d)] = s;
        }
  return AlgCurvTensor<double>::raw(out, rm.orientation());
}

template <class T>
AlgCurvTensor<T> frame_for_blocks(const AlgCurvTensor<T>& rm, const SymBilinear4<T>& g) {
  if (g.is_identity()) return rm;
  if constexpr (ScalarTraits<T>::exact) {
    throw Error(ErrorCode::NotOrthonormalFrame,
                "exact block form needs orthonormal-frame components");
  } else {
    return to_orthonormal_frame(rm, g);
  }
}

}  // namespace

template <class T>
SymBilinear4<T> ricci_contraction(const AlgCurvTensor<T>& rm) {
  SymBilinear4<T> ric;
  for (int j = 0; j < 4; ++j)
    for (int l = j; l < 4; ++l) {
      T s(0);
      for (int i = 0; i < 4; ++i) s += rm(i, j, i, l);
      ric.set(j, l, s);
    }
  return ric;
}

template <class T>
AlgCurvTensor<T> kulkarni_nomizu(const SymBilinear4<T>& a, const SymBilinear4<T>& b) {
  typename AlgCurvTensor<T>::Components c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          c[AlgCurvTensor<T>::index(i, j, k, l)] =
              a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) - a(j, k) * b(i, l);
  return AlgCurvTensor<T>::raw(c);
}

template <class T>
T weyl_trace_residual(const AlgCurvTensor<T>& w) {
  T worst(0);
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      T s(0);
      for (int i = 0; i < 4; ++i) s += w(i, j, i, l);
      if (abs_value(s) > worst) worst = abs_value(s);
    }
  return worst;
}

template <class T>
std::array<std::array<T, 4>, 4> act_on_two_form(const AlgCurvTensor<T>& rm, const Bivector& w) {
  std::array<std::array<T, 4>, 4> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      T s(0);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          if (int x = w[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]; x != 0)
            s += T(x) * rm(i, j, k, l);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s / T(2);
    }
  return out;
}

template <class T>
Lambda2Operator<T> as_lambda2_operator(const AlgCurvTensor<T>& rm, const Lambda2Basis& basis) {
  if (!basis.is_orthogonal())
    throw Error(ErrorCode::BasisNotOrthogonal, "Gram matrix of the Λ² basis is not 2·Id");
  // ⟨Rm ω_a, ω_b⟩ / ⟨ω_b, ω_b⟩ = ⅛ Σ R_ijkl (ω_b)_ij (ω_a)_kl
  typename Lambda2Operator<T>::Matrix m;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      T s(0);
      for (const auto& eb : basis.support(b))
        for (const auto& ea : basis.support(a))
          s += T(eb.value * ea.value) * rm(eb.i, eb.j, ea.i, ea.j);
      m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s / T(8);
    }
  return Lambda2Operator<T>(m);
}

template <class T>
Lambda2Operator<T> as_lambda2_operator(const AlgCurvTensor<T>& rm) {
  return as_lambda2_operator(rm, Lambda2Basis::standard(rm.orientation()));
}

template <class T>
CurvDecomp<T> weyl_decompose(const AlgCurvTensor<T>& rm, const SymBilinear4<T>& metric) {
  if (!metric.is_positive_definite())
    throw Error(ErrorCode::DegenerateMetric, "metric is not positive definite");
  rm.validate();

  const auto ginv = inverse4(metric);
  CurvDecomp<T> d;
  d.metric = metric.with_role(Role::metric);
  d.orientation = rm.orientation();

  SymBilinear4<T> ric;
  for (int j = 0; j < 4; ++j)
    for (int l = j; l < 4; ++l) {
      T s(0);
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
          s += ginv[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * rm(i, j, k, l);
      ric.set(j, l, s);
    }
  T scalar(0);
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l)
      scalar += ginv[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] * ric(j, l);

  d.scalar = scalar;
  d.ricci = ric.with_role(Role::ricci);
  SymBilinear4<T> ric0 = ric - (scalar / T(4)) * metric;
  // the plain matrix trace is the metric trace only in an orthonormal frame
  d.traceless_ricci = metric.is_identity() ? ric0.with_role(Role::traceless_ricci) : ric0;
  d.schouten = (ric - (scalar / T(6)) * metric).with_role(Role::schouten);

  // W = Rm − ½ Ric⊙g + (R/12) g⊙g
  d.full_weyl = rm - T(1) / T(2) * kulkarni_nomizu(ric, metric) +
                scalar / T(12) * kulkarni_nomizu(metric, metric);
  d.full_weyl = d.full_weyl.with_orientation(rm.orientation());

  const AlgCurvTensor<T> frame_rm = frame_for_blocks(rm, metric);
  const AlgCurvTensor<T> frame_w = frame_for_blocks(d.full_weyl, metric);
  d.curvature_operator = as_lambda2_operator(frame_rm);
  const Lambda2Operator<T> w_op = as_lambda2_operator(frame_w);
  d.weyl_plus = w_op.block(Duality::self_dual, BlockKind::generic);
  d.weyl_minus = w_op.block(Duality::anti_self_dual, BlockKind::generic);
  // Re-tag after forming: the trace vanishes up to rounding.
  d.weyl_plus = Block3<T>(d.weyl_plus.matrix(), Duality::self_dual,
                          abs_value(d.weyl_plus.trace()) <= ScalarTraits<T>::tol_abs()
                              ? BlockKind::weyl
                              : BlockKind::generic);
  d.weyl_minus = Block3<T>(d.weyl_minus.matrix(), Duality::anti_self_dual,
                           abs_value(d.weyl_minus.trace()) <= ScalarTraits<T>::tol_abs()
                               ? BlockKind::weyl
                               : BlockKind::generic);
  d.ric_block = d.curvature_operator.off_diagonal();
  return d;
}

template <class T>
AlgCurvTensor<T> recompose(const CurvDecomp<T>& d) {
  AlgCurvTensor<T> out = d.full_weyl + T(1) / T(2) * kulkarni_nomizu(d.ricci, d.metric) -
                         d.scalar / T(12) * kulkarni_nomizu(d.metric, d.metric);
  return out.with_orientation(d.orientation);
}

template <class T>
T block_inner(const Block3<T>& a, const Block3<T>& b) {
  if (a.duality() != b.duality())
    throw Error(ErrorCode::DualityMismatch, "inner product of blocks from different halves of Λ²");
  T s(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a(i, j) * b(i, j);
  return s;
}

template <class T>
double BlockNorms<T>::traceless_ricci() const {
  return std::sqrt(to_double(traceless_ricci_sq));
}
template <class T>
double BlockNorms<T>::weyl_plus() const {
  return std::sqrt(to_double(weyl_plus_sq));
}
template <class T>
double BlockNorms<T>::weyl_minus() const {
  return std::sqrt(to_double(weyl_minus_sq));
}

template <class T>
BlockNorms<T> block_norms(const CurvDecomp<T>& d) {
  BlockNorms<T> n;
  n.scalar = d.scalar;
  n.traceless_ricci_sq = d.traceless_ricci.norm_sq();
  n.weyl_plus_sq = d.weyl_plus.frobenius_sq();
  n.weyl_minus_sq = d.weyl_minus.frobenius_sq();
  n.det_weyl_plus = d.weyl_plus.determinant();
  n.det_weyl_minus = d.weyl_minus.determinant();
  return n;
}

template <class T>
Block3<T> kn_square_block(const SymBilinear4<T>& ric0, int orientation, Duality duality) {
  const AlgCurvTensor<T> kn = kulkarni_nomizu(ric0, ric0).with_orientation(orientation);
  return as_lambda2_operator(kn).block(duality, BlockKind::kn_product);
}

template <class T>
Block3<T> kn_square_block(const CurvDecomp<T>& d, Duality duality) {
  if (!d.metric.is_identity()) {
    if constexpr (ScalarTraits<T>::exact) {
      throw Error(ErrorCode::NotOrthonormalFrame, "exact block form needs an orthonormal frame");
    } else {
      const AlgCurvTensor<double> kn = to_orthonormal_frame(
          kulkarni_nomizu(d.traceless_ricci, d.traceless_ricci).with_orientation(d.orientation),
          d.metric);
      return as_lambda2_operator(kn).block(duality, BlockKind::kn_product);
    }
  }
  return kn_square_block(d.traceless_ricci, d.orientation, duality);
}

#define CURV4_INSTANTIATE(T)                                                                   \
  template class SymBilinear4<T>;                                                              \
  template class AlgCurvTensor<T>;                                                             \
  template class Block3<T>;                                                                    \
  template class Lambda2Operator<T>;                                                           \
  template struct BlockNorms<T>;                                                               \
  template CurvDecomp<T> weyl_decompose(const AlgCurvTensor<T>&, const SymBilinear4<T>&);     \
  template AlgCurvTensor<T> recompose(const CurvDecomp<T>&);                                   \
  template AlgCurvTensor<T> kulkarni_nomizu(const SymBilinear4<T>&, const SymBilinear4<T>&);  \
  template SymBilinear4<T> ricci_contraction(const AlgCurvTensor<T>&);                         \
  template T weyl_trace_residual(const AlgCurvTensor<T>&);                                     \
  template std::array<std::array<T, 4>, 4> act_on_two_form(const AlgCurvTensor<T>&,           \
                                                           const Bivector&);                   \
  template Lambda2Operator<T> as_lambda2_operator(const AlgCurvTensor<T>&, const Lambda2Basis&); \
  template Lambda2Operator<T> as_lambda2_operator(const AlgCurvTensor<T>&);                    \
  template T block_inner(const Block3<T>&, const Block3<T>&);                                  \
  template BlockNorms<T> block_norms(const CurvDecomp<T>&);                                    \
  template Block3<T> kn_square_block(const CurvDecomp<T>&, Duality);                           \
  template Block3<T> kn_square_block(const SymBilinear4<T>&, int, Duality);

CURV4_INSTANTIATE(double)
CURV4_INSTANTIATE(Rational)

#undef CURV4_INSTANTIATE

}  // namespace curv4
