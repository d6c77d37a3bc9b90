#pragma once

#include <functional>
#include <string>

#include "bq/core.hpp"

namespace bq {

struct Domain {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  bool contains(double u, double v, double slack = 1e-12) const {
    return u >= u0 - slack && u <= u1 + slack && v >= v0 - slack && v <= v1 + slack;
  }
};

// uniform nu x nv lattice, nodes on the domain corners
struct Grid {
  Domain dom;
  int nu = 50, nv = 50;

  Grid() = default;
  Grid(const Domain& d, int nu_, int nv_);
  double du() const { return (dom.u1 - dom.u0) / (nu - 1); }
  double dv() const { return (dom.v1 - dom.v0) / (nv - 1); }
  double u(int i) const { return dom.u0 + i * du(); }
  double v(int j) const { return dom.v0 + j * dv(); }
  int size() const { return nu * nv; }
  int index(int i, int j) const { return i * nv + j; }
};

// evaluator(u, v, with_position). Some patches need a quadrature for the
// position only, so callers that only want derivatives pass false.
using JetFn = std::function<Jet2(double, double, bool)>;

class SurfacePatch {
 public:
  SurfacePatch() = default;
  SurfacePatch(std::string name, Domain dom, JetFn fn);

  const std::string& name() const { return name_; }
  const Domain& domain() const { return dom_; }
  Jet2 jet(double u, double v, bool with_position = true) const { return fn_(u, v, with_position); }
  CVec3 point(double u, double v) const { return fn_(u, v, true).x; }

 private:
  std::string name_;
  Domain dom_;
  JetFn fn_;
};

struct Geometry {
  CVec3 n;    // unit normal
  CMat2 I;    // first form
  CMat2 II;   // second form
  cplx K;     // det II / det I
  cplx W;     // sqrt |xu x xv|^2
};

Geometry eval_geometry(const Jet2& j);
inline Geometry eval_geometry(const SurfacePatch& p, double u, double v) { return eval_geometry(p.jet(u, v)); }

// unit normal with its first derivatives, from the jet
struct NormalJet {
  CVec3 n, nu, nv;
  cplx W;
};
NormalJet normal_jet(const Jet2& j);

double applicability_residual(const SurfacePatch& x0, const SurfacePatch& x, const Grid& g);

// fixtures
SurfacePatch plane_patch(const Domain& d);
SurfacePatch sphere_patch(double r, const Domain& d);
// (a sin u cos v, b sin u sin v, c cos u)
SurfacePatch ellipsoid_patch(double a, double b, double c, const Domain& d);
// cone t -> t Y(s) over the isotropic cone, (u, v) = (s, t)
SurfacePatch isotropic_cone_patch(const Domain& d);
SurfacePatch moved_patch(const SurfacePatch& p, const RigidMotion& g);
SurfacePatch scaled_patch(const SurfacePatch& p, double s);

struct Profile {
  std::string name;
  std::function<double(double)> r, dr, ddr, h, dh, ddh;
};
// r = a sin u, h = b cos u: lies on the quadric diag(1/a^2, 1/a^2, 1/b^2)
Profile spheroid_profile(double a, double b);

SurfacePatch revolution_patch(const Profile& p, const Domain& d);

// x_c = (c r cos(v/c), c r sin(v/c), H_c(u)), H_c'^2 = r'^2 + h'^2 - c^2 r'^2.
// The sign of H_c' follows h' at the domain midpoint and H_c matches h there.
SurfacePatch bending_of_revolution(const Profile& p, double c, const Domain& d, bool complex_continuation = false);

}  // namespace bq
