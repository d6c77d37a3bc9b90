#include "bq/surface.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <utility>

#include "bq/quadric.hpp"

namespace bq {

Grid::Grid(const Domain& d, int nu_, int nv_) : dom(d), nu(nu_), nv(nv_) {
  if (nu < 3 || nv < 3) throw Error(Errc::GridTooSmall, "grid needs at least 3 points per axis");
}

SurfacePatch::SurfacePatch(std::string name, Domain dom, JetFn fn)
    : name_(std::move(name)), dom_(dom), fn_(std::move(fn)) {}

NormalJet normal_jet(const Jet2& j) {
  const CVec3 c = cross(j.xu, j.xv);
  if (is_isotropic(c, 1e-10)) throw Error(Errc::IsotropicNormal, "isotropic normal direction");
  const cplx w2 = bsq(c);
  const cplx w = std::sqrt(w2);
  const CVec3 cu = cross(j.xuu, j.xv) + cross(j.xu, j.xuv);
  const CVec3 cv = cross(j.xuv, j.xv) + cross(j.xu, j.xvv);
  NormalJet out;
  out.W = w;
  out.n = c / w;
  out.nu = cu / w - c * (bdot(c, cu) / (w2 * w));
  out.nv = cv / w - c * (bdot(c, cv) / (w2 * w));
  return out;
}

Geometry eval_geometry(const Jet2& j) {
  const CVec3 c = cross(j.xu, j.xv);
  if (is_isotropic(c, 1e-10)) throw Error(Errc::IsotropicNormal, "isotropic normal direction");
  Geometry g;
  g.W = std::sqrt(bsq(c));
  g.n = c / g.W;
  g.I << bdot(j.xu, j.xu), bdot(j.xu, j.xv), bdot(j.xu, j.xv), bdot(j.xv, j.xv);
  g.II << bdot(g.n, j.xuu), bdot(g.n, j.xuv), bdot(g.n, j.xuv), bdot(g.n, j.xvv);
  g.K = g.II.determinant() / g.I.determinant();
  return g;
}

double applicability_residual(const SurfacePatch& x0, const SurfacePatch& x, const Grid& g) {
  double r = 0;
  for (int i = 0; i < g.nu; ++i)
    for (int k = 0; k < g.nv; ++k) {
      const Jet2 a = x0.jet(g.u(i), g.v(k), false);
      const Jet2 b = x.jet(g.u(i), g.v(k), false);
      r = std::max({r, std::abs(bdot(a.xu, a.xu) - bdot(b.xu, b.xu)), std::abs(bdot(a.xu, a.xv) - bdot(b.xu, b.xv)),
                    std::abs(bdot(a.xv, a.xv) - bdot(b.xv, b.xv))});
    }
  return r;
}

SurfacePatch plane_patch(const Domain& d) {
  return SurfacePatch("plane", d, [](double u, double v, bool) {
    Jet2 j;
    j.x = CVec3(u, v, 0.0);
    j.xu = e1();
    j.xv = e2();
    return j;
  });
}

SurfacePatch sphere_patch(double r, const Domain& d) { return ellipsoid_patch(r, r, r, d); }

SurfacePatch ellipsoid_patch(double a, double b, double c, const Domain& d) {
  return SurfacePatch("ellipsoid", d, [a, b, c](double u, double v, bool) {
    const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
    Jet2 j;
    j.x = CVec3(a * su * cv, b * su * sv, c * cu);
    j.xu = CVec3(a * cu * cv, b * cu * sv, -c * su);
    j.xv = CVec3(-a * su * sv, b * su * cv, 0.0);
    j.xuu = CVec3(-a * su * cv, -b * su * sv, -c * cu);
    j.xuv = CVec3(-a * cu * sv, b * cu * cv, 0.0);
    j.xvv = CVec3(-a * su * cv, -b * su * sv, 0.0);
    return j;
  });
}

SurfacePatch isotropic_cone_patch(const Domain& d) {
  return SurfacePatch("isotropic-cone", d, [](double s, double t, bool) {
    const ConeRuling y = cone_ruling(s);
    Jet2 j;
    j.x = t * y.y;
    j.xu = t * y.dy;
    j.xv = y.y;
    j.xuu = t * y.ddy;
    j.xuv = y.dy;
    return j;
  });
}

SurfacePatch moved_patch(const SurfacePatch& p, const RigidMotion& g) {
  return SurfacePatch(p.name() + "-moved", p.domain(), [p, g](double u, double v, bool pos) {
    Jet2 j = g.rotation() * p.jet(u, v, pos);
    j.x += g.translation();
    return j;
  });
}

SurfacePatch scaled_patch(const SurfacePatch& p, double s) {
  return SurfacePatch(p.name() + "-scaled", p.domain(), [p, s](double u, double v, bool pos) {
    return CMat3(s * CMat3::Identity()) * p.jet(u, v, pos);
  });
}

Profile spheroid_profile(double a, double b) {
  Profile p;
  p.name = "spheroid";
  p.r = [a](double u) { return a * std::sin(u); };
  p.dr = [a](double u) { return a * std::cos(u); };
  p.ddr = [a](double u) { return -a * std::sin(u); };
  p.h = [b](double u) { return b * std::cos(u); };
  p.dh = [b](double u) { return -b * std::sin(u); };
  p.ddh = [b](double u) { return -b * std::cos(u); };
  return p;
}

SurfacePatch revolution_patch(const Profile& p, const Domain& d) {
  return SurfacePatch(p.name, d, [p](double u, double v, bool) {
    const double r = p.r(u), dr = p.dr(u), ddr = p.ddr(u), cv = std::cos(v), sv = std::sin(v);
    Jet2 j;
    j.x = CVec3(r * cv, r * sv, p.h(u));
    j.xu = CVec3(dr * cv, dr * sv, p.dh(u));
    j.xv = CVec3(-r * sv, r * cv, 0.0);
    j.xuu = CVec3(ddr * cv, ddr * sv, p.ddh(u));
    j.xuv = CVec3(-dr * sv, dr * cv, 0.0);
    j.xvv = CVec3(-r * cv, -r * sv, 0.0);
    return j;
  });
}

SurfacePatch bending_of_revolution(const Profile& p, double c, const Domain& d, bool complex_continuation) {
  if (c == 0.0) throw Error(Errc::InvalidArgument, "bending parameter must be nonzero");
  auto g = [p, c](double u) {
    const double dr = p.dr(u), dh = p.dh(u);
    return dr * dr * (1 - c * c) + dh * dh;
  };
  if (!complex_continuation) {
    const int n = 2001;
    for (int k = 0; k < n; ++k) {
      const double u = d.u0 + (d.u1 - d.u0) * k / (n - 1);
      if (g(u) < 0) throw Error(Errc::BendOutOfRange, "c^2 r'^2 exceeds r'^2 + h'^2 on the domain");
    }
  }
  const double uref = 0.5 * (d.u0 + d.u1);
  const double sigma = p.dh(uref) >= 0 ? 1.0 : -1.0;
  auto dH = [g, sigma](double u) { return sigma * std::sqrt(cplx(g(u), 0.0)); };
  auto ddH = [p, c, g, sigma](double u) {
    const double dr = p.dr(u), dh = p.dh(u);
    const double dg = 2 * dr * p.ddr(u) * (1 - c * c) + 2 * dh * p.ddh(u);
    return sigma * dg / (2.0 * std::sqrt(cplx(g(u), 0.0)));
  };
  const double href = p.h(uref);
  auto H = [dH, uref, href](double u) {
    using boost::math::quadrature::gauss;
    const double re = gauss<double, 30>::integrate([&](double s) { return dH(s).real(); }, uref, u);
    const double im = gauss<double, 30>::integrate([&](double s) { return dH(s).imag(); }, uref, u);
    return cplx(href + re, im);
  };
  std::string name = p.name + "-bent";
  return SurfacePatch(name, d, [p, c, dH, ddH, H](double u, double v, bool pos) {
    const double s = v / c, cs = std::cos(s), ss = std::sin(s);
    const double r = p.r(u), dr = p.dr(u), ddr = p.ddr(u);
    Jet2 j;
    j.x = CVec3(c * r * cs, c * r * ss, pos ? H(u) : cplx(0.0));
    j.xu = CVec3(c * dr * cs, c * dr * ss, dH(u));
    j.xv = CVec3(-r * ss, r * cs, 0.0);
    j.xuu = CVec3(c * ddr * cs, c * ddr * ss, ddH(u));
    j.xuv = CVec3(-dr * ss, dr * cs, 0.0);
    j.xvv = CVec3(-r * cs / c, -r * ss / c, 0.0);
    return j;
  });
}

}  // namespace bq
