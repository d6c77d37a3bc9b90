#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace bq {

using cplx = std::complex<double>;
using CVec3 = Eigen::Matrix<cplx, 3, 1>;
using CMat3 = Eigen::Matrix<cplx, 3, 3>;
using CMat2 = Eigen::Matrix<cplx, 2, 2>;

inline const cplx I1{0.0, 1.0};

enum class Errc {
  NotSkew,
  NotOrthogonal,
  NotSymmetric,
  IsotropicKernel,
  IsotropicNormal,
  SingularMember,
  ChartPole,
  NotApplicable,
  GridTooSmall,
  BendOutOfRange,
  RulingParallelToPlane,
  DegenerateDenominator,
  ZeroSpectralParameter,
  RicattiBlowup,
  DegenerateLeaf,
  NotCollinear,
  NoRealization,
  ClosureFailure,
  TransversalityFailure,
  DegenerateField,
  InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// basis and the isotropic pair f1 = (e1 - i e2)/sqrt2, f1bar = (e1 + i e2)/sqrt2
CVec3 e1();
CVec3 e2();
CVec3 e3();
CVec3 f1();
CVec3 f1bar();

// x^T y, no conjugation. Eigen's dot() conjugates, so never use it here.
inline cplx bdot(const CVec3& a, const CVec3& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}
inline cplx bsq(const CVec3& a) { return bdot(a, a); }

CVec3 cross(const CVec3& a, const CVec3& b);

// Hermitian norm, only for tolerance scaling
inline double hnorm(const CVec3& a) { return a.norm(); }

bool is_isotropic(const CVec3& x, double tol = 1e-9);
// x / sqrt(x^T x), principal branch
CVec3 unit(const CVec3& x);

CMat3 alpha(const CVec3& a);
CVec3 alpha_inv(const CMat3& m, double tol = 1e-9);
// 1/2 tr(X^T Y)
cplx mat_inner(const CMat3& x, const CMat3& y);

bool is_symmetric(const CMat3& m, double tol = 1e-9);
bool is_orthogonal(const CMat3& m, double tol = 1e-9);
bool is_skew(const CMat3& m, double tol = 1e-9);

// scale used for relative tolerances
inline double mscale(const CMat3& m) { return std::max(1.0, m.norm()); }

// omega = du * du-coefficient + dv * dv-coefficient
struct OneForm3 {
  CVec3 du = CVec3::Zero();
  CVec3 dv = CVec3::Zero();
  OneForm3 operator+(const OneForm3& o) const { return {du + o.du, dv + o.dv}; }
  OneForm3 operator-(const OneForm3& o) const { return {du - o.du, dv - o.dv}; }
  OneForm3 operator*(cplx s) const { return {du * s, dv * s}; }
};

struct OneForm1 {
  cplx du{};
  cplx dv{};
};

// a^T omega
OneForm1 pair(const CVec3& a, const OneForm3& w);
// du^dv coefficient of a ^ b for scalar forms
cplx wedge(const OneForm1& a, const OneForm1& b);
// du^dv coefficient of w1^T ^ w2
cplx wedge_dot(const OneForm3& w1, const OneForm3& w2);
// du^dv coefficient of w1 x^ w2
CVec3 wedge_cross(const OneForm3& w1, const OneForm3& w2);
// a^T w1 ^ b^T w2 - (a x b)^T (w1 x^ w2) - b^T w1 ^ a^T w2
cplx che_residual(const CVec3& a, const CVec3& b, const OneForm3& w1, const OneForm3& w2);

// value and partials up to order 2 at one parameter point
struct Jet2 {
  CVec3 x = CVec3::Zero();
  CVec3 xu = CVec3::Zero();
  CVec3 xv = CVec3::Zero();
  CVec3 xuu = CVec3::Zero();
  CVec3 xuv = CVec3::Zero();
  CVec3 xvv = CVec3::Zero();
};

inline Jet2 operator*(const CMat3& m, const Jet2& j) {
  return {m * j.x, m * j.xu, m * j.xv, m * j.xuu, m * j.xuv, m * j.xvv};
}

struct Facet {
  CVec3 point;
  CVec3 normal;
};

class RigidMotion {
 public:
  RigidMotion();
  RigidMotion(const CMat3& rot, const CVec3& trans);

  const CMat3& rotation() const { return rot_; }
  const CVec3& translation() const { return trans_; }
  cplx det() const { return det_; }
  int det_sign() const { return det_.real() >= 0 ? 1 : -1; }

  CVec3 apply(const CVec3& p) const { return rot_ * p + trans_; }
  Facet apply(const Facet& f) const { return {apply(f.point), rot_ * f.normal}; }
  // (this o other)(p) = this(other(p))
  RigidMotion compose(const RigidMotion& other) const;
  RigidMotion inverse(double tol = 1e-9) const;

 private:
  CMat3 rot_;
  CVec3 trans_;
  cplx det_;
};

// R = Cayley transform of alpha(w); orthogonal for any w with 1 + w^T w != 0
CMat3 cayley_rotation(const CVec3& w);

// Richardson-extrapolated central difference of a vector valued map
template <class F>
auto rdiff(const F& f, double h) {
  using T = std::decay_t<decltype(f(h))>;
  T d1 = (f(h) - f(-h)) / (2 * h);
  T d2 = (f(2 * h) - f(-2 * h)) / (4 * h);
  T r = (4.0 * d1 - d2) / 3.0;
  return r;
}

}  // namespace bq
