#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "bq/core.hpp"

namespace bq {

// X(u,v) = (-uv f1 + 2 f1bar + (u+v) e3)/(u-v), the unit sphere in null coordinates
Jet2 sphere_chart(cplx u, cplx v, double pole_tol = 1e-12);
// Z(u,v) = u f1 + v f1bar + uv e3
Jet2 paraboloid_chart(cplx u, cplx v);

struct ConeRuling {
  CVec3 y;   // Y(v)
  CVec3 dy;  // Y'(v)
  CVec3 ddy;
};
// Y(v) = -v^2 f1 + 2 f1bar + 2v e3
ConeRuling cone_ruling(cplx v);

// inverse of X for a point with p^T p = 1; throws ChartPole when f1^T p = 0
std::pair<cplx, cplx> sphere_chart_inverse(const CVec3& p, double tol = 1e-12);

CMat3 sym_sqrt(const CMat3& m);
// same, with eigenvalue signs picked to stay close to prev (branch continuity)
CMat3 sym_sqrt_near(const CMat3& m, const CMat3& prev);

class Quadric {
 public:
  explicit Quadric(const CMat3& a);

  const CMat3& matrix() const { return a_; }
  const CMat3& inverse() const { return ainv_; }
  cplx residual(const CVec3& x) const { return bdot(x, a_ * x) - 1.0; }
  // unit bilinear normal A x / sqrt(x^T A^2 x)
  CVec3 normal(const CVec3& x) const { return unit(a_ * x); }
  // Gauss curvature of the quadric at x: det A / (x^T A^2 x)^2
  cplx gauss_curvature(const CVec3& x) const;

 private:
  CMat3 a_;
  CMat3 ainv_;
};

class ConfocalFamily {
 public:
  explicit ConfocalFamily(const Quadric& base);

  const Quadric& base() const { return base_; }
  // eigenvalues of A^-1, sorted lexicographically on (re, im)
  const std::array<cplx, 3>& singular_parameters() const { return sing_; }
  bool near_singular(cplx z, double tol = 1e-9) const;
  Quadric member(cplx z) const;
  // I - zA
  CMat3 ivory_operator(cplx z) const;
  // sqrt(I - zA) p for p on the base quadric
  CVec3 ivory_map(cplx z, const CVec3& p, double tol = 1e-9) const;

 private:
  Quadric base_;
  std::array<cplx, 3> sing_;
};

enum class FrameKind { Symmetric, RealRulings };

// x(u,v) = M X(u,v) with M M^T = A^-1
class RulingChart {
 public:
  RulingChart(const Quadric& q, const CMat3& frame);
  static RulingChart of(const Quadric& q, FrameKind kind = FrameKind::Symmetric);

  const Quadric& quadric() const { return q_; }
  const CMat3& frame() const { return m_; }
  Jet2 eval(cplx u, cplx v) const { return m_ * sphere_chart(u, v); }
  CVec3 point(cplx u, cplx v) const;
  // chart parameters of a point on the quadric
  std::pair<cplx, cplx> locate(const CVec3& x) const;

 private:
  Quadric q_;
  CMat3 m_;
  CMat3 minv_;
};

// Frame for a real symmetric A^-1 with exactly one negative eigenvalue, so that
// real (u,v) give real points of the one-sheet hyperboloid.
std::optional<CMat3> real_ruling_frame(const CMat3& ainv, double tol = 1e-12);

// The auxiliary member x_z with frame M and the base quadric with the frame
// (sqrt R_z)^-1 M, so that the Ivory map sends base.point(u,v) to aux.point(u,v).
struct ConfocalPair {
  cplx z;
  RulingChart aux;
  RulingChart base;
  CMat3 ivory;  // sqrt(I - zA)
};
ConfocalPair confocal_pair(const ConfocalFamily& fam, cplx z, FrameKind kind = FrameKind::RealRulings);
// same, with an explicit auxiliary frame
ConfocalPair confocal_pair(const ConfocalFamily& fam, cplx z, const CMat3& aux_frame);

struct IsotropicRulings {
  bool all_isotropic = false;
  std::array<cplx, 5> coefficients{};  // q(v) = sum c_k v^k
  std::vector<cplx> roots;             // finite roots, lexicographic
  std::vector<int> multiplicity;       // per distinct root
  std::vector<cplx> distinct;
  int at_infinity = 0;
};
// roots of Y(v)^T A^-1 Y(v) = 0. The u-family gives the same quartic.
IsotropicRulings isotropic_rulings(const Quadric& q);

}  // namespace bq
