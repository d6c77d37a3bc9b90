#include "bq/core.hpp"

#include <cmath>

namespace bq {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotSkew: return "NotSkew";
    case Errc::NotOrthogonal: return "NotOrthogonal";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::IsotropicKernel: return "IsotropicKernel";
    case Errc::IsotropicNormal: return "IsotropicNormal";
    case Errc::SingularMember: return "SingularMember";
    case Errc::ChartPole: return "ChartPole";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::BendOutOfRange: return "BendOutOfRange";
    case Errc::RulingParallelToPlane: return "RulingParallelToPlane";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::ZeroSpectralParameter: return "ZeroSpectralParameter";
    case Errc::RicattiBlowup: return "RicattiBlowup";
    case Errc::DegenerateLeaf: return "DegenerateLeaf";
    case Errc::NotCollinear: return "NotCollinear";
    case Errc::NoRealization: return "NoRealization";
    case Errc::ClosureFailure: return "ClosureFailure";
    case Errc::TransversalityFailure: return "TransversalityFailure";
    case Errc::DegenerateField: return "DegenerateField";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

CVec3 e1() { return CVec3(1.0, 0.0, 0.0); }
CVec3 e2() { return CVec3(0.0, 1.0, 0.0); }
CVec3 e3() { return CVec3(0.0, 0.0, 1.0); }
CVec3 f1() {
  const double s = 1.0 / std::sqrt(2.0);
  return CVec3(s, -I1 * s, 0.0);
}
CVec3 f1bar() {
  const double s = 1.0 / std::sqrt(2.0);
  return CVec3(s, I1 * s, 0.0);
}

CVec3 cross(const CVec3& a, const CVec3& b) {
  return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

bool is_isotropic(const CVec3& x, double tol) {
  const double s = x.squaredNorm();
  if (s == 0.0) return true;
  return std::abs(bsq(x)) <= tol * s;
}

CVec3 unit(const CVec3& x) {
  if (is_isotropic(x, 1e-12)) throw Error(Errc::IsotropicNormal, "cannot normalize an isotropic vector");
  return x / std::sqrt(bsq(x));
}

CMat3 alpha(const CVec3& a) {
  CMat3 m;
  m << 0.0, -a(2), a(1),
       a(2), 0.0, -a(0),
       -a(1), a(0), 0.0;
  return m;
}

bool is_skew(const CMat3& m, double tol) { return (m + m.transpose()).norm() <= tol * mscale(m); }
bool is_symmetric(const CMat3& m, double tol) { return (m - m.transpose()).norm() <= tol * mscale(m); }
bool is_orthogonal(const CMat3& m, double tol) {
  return (m.transpose() * m - CMat3::Identity()).norm() <= tol * mscale(m);
}

CVec3 alpha_inv(const CMat3& m, double tol) {
  if (!is_skew(m, tol)) throw Error(Errc::NotSkew, "alpha_inv needs a skew matrix");
  return CVec3(m(2, 1), m(0, 2), m(1, 0));
}

cplx mat_inner(const CMat3& x, const CMat3& y) { return 0.5 * (x.transpose() * y).trace(); }

OneForm1 pair(const CVec3& a, const OneForm3& w) { return {bdot(a, w.du), bdot(a, w.dv)}; }

cplx wedge(const OneForm1& a, const OneForm1& b) { return a.du * b.dv - a.dv * b.du; }

cplx wedge_dot(const OneForm3& w1, const OneForm3& w2) { return bdot(w1.du, w2.dv) - bdot(w1.dv, w2.du); }

CVec3 wedge_cross(const OneForm3& w1, const OneForm3& w2) { return cross(w1.du, w2.dv) - cross(w1.dv, w2.du); }

cplx che_residual(const CVec3& a, const CVec3& b, const OneForm3& w1, const OneForm3& w2) {
  const cplx lhs = wedge(pair(a, w1), pair(b, w2));
  const cplx rhs = bdot(cross(a, b), wedge_cross(w1, w2)) + wedge(pair(b, w1), pair(a, w2));
  return lhs - rhs;
}

RigidMotion::RigidMotion() : rot_(CMat3::Identity()), trans_(CVec3::Zero()), det_(1.0) {}

RigidMotion::RigidMotion(const CMat3& rot, const CVec3& trans)
    : rot_(rot), trans_(trans), det_(rot.determinant()) {}

RigidMotion RigidMotion::compose(const RigidMotion& o) const {
  return RigidMotion(rot_ * o.rot_, rot_ * o.trans_ + trans_);
}

RigidMotion RigidMotion::inverse(double tol) const {
  if (!is_orthogonal(rot_, tol)) throw Error(Errc::NotOrthogonal, "rotation is not orthogonal");
  CMat3 rt = rot_.transpose();
  return RigidMotion(rt, -(rt * trans_));
}

CMat3 cayley_rotation(const CVec3& w) {
  const CMat3 a = alpha(w);
  const CMat3 id = CMat3::Identity();
  return (id + a) * (id - a).inverse();
}

}  // namespace bq
