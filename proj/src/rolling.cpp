#include "bq/rolling.hpp"

#include <random>

namespace bq {

namespace {

CMat3 cols(const CVec3& a, const CVec3& b, const CVec3& c) {
  CMat3 m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  return m;
}

CMat3 rot_at(const SurfacePatch& x0, const SurfacePatch& x, double u, double v) {
  return roll_point(x0, x, u, v, false).R;
}

}  // namespace

RollingPoint roll_point(const SurfacePatch& x0, const SurfacePatch& x, double u, double v, bool with_translation) {
  const Jet2 j0 = x0.jet(u, v, with_translation);
  const Jet2 j = x.jet(u, v, with_translation);
  const NormalJet n0 = normal_jet(j0);
  NormalJet n = normal_jet(j);
  RollingPoint p;
  p.u = u;
  p.v = v;
  p.R = cols(j.xu, j.xv, n.n) * cols(j0.xu, j0.xv, n0.n).inverse();
  if (p.R.determinant().real() < 0) {
    n.n = -n.n;
    p.flipped = true;
    p.R = cols(j.xu, j.xv, n.n) * cols(j0.xu, j0.xv, n0.n).inverse();
  }
  if (with_translation) p.t = j.x - p.R * j0.x;
  p.s << bdot(n.n, j.xuu) - bdot(n0.n, j0.xuu), bdot(n.n, j.xuv) - bdot(n0.n, j0.xuv),
      bdot(n.n, j.xuv) - bdot(n0.n, j0.xuv), bdot(n.n, j.xvv) - bdot(n0.n, j0.xvv);
  p.omega.du = (p.s(0, 1) * j0.xu - p.s(0, 0) * j0.xv) / n0.W;
  p.omega.dv = (p.s(1, 1) * j0.xu - p.s(1, 0) * j0.xv) / n0.W;
  p.x0 = j0.x;
  p.n0 = n0.n;
  p.n = n.n;
  p.dx0 = {j0.xu, j0.xv};
  p.dn0 = {n0.nu, n0.nv};
  p.K0 = eval_geometry(j0).K;
  return p;
}

RollingData rolling_compute(const SurfacePatch& x0, const SurfacePatch& x, const Grid& g, double app_tol) {
  const double app = applicability_residual(x0, x, g);
  if (app > app_tol) throw Error(Errc::NotApplicable, "first fundamental forms differ by " + std::to_string(app));
  RollingData d{x0, x, g, {}};
  d.pts.reserve(g.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) d.pts.push_back(roll_point(x0, x, g.u(i), g.v(j), true));
  return d;
}

OneForm3 omega_route1(const SurfacePatch& x0, const SurfacePatch& x, double u, double v, double h) {
  const RollingPoint p = roll_point(x0, x, u, v, false);
  const double sn = p.flipped ? -1.0 : 1.0;
  auto n_at = [&](const SurfacePatch& s, double a, double b) { return normal_jet(s.jet(a, b, false)).n; };
  const CVec3 nu = sn * (n_at(x, u + h, v) - n_at(x, u - h, v)) / (2 * h);
  const CVec3 nv = sn * (n_at(x, u, v + h) - n_at(x, u, v - h)) / (2 * h);
  const CVec3 n0u = (n_at(x0, u + h, v) - n_at(x0, u - h, v)) / (2 * h);
  const CVec3 n0v = (n_at(x0, u, v + h) - n_at(x0, u, v - h)) / (2 * h);
  const CMat3 rt = p.R.transpose();
  OneForm3 w;
  w.du = rt * cross(p.n, nu) - cross(p.n0, n0u);
  w.dv = rt * cross(p.n, nv) - cross(p.n0, n0v);
  return w;
}

RollingChecks rolling_checks(const RollingData& d, double h, unsigned seed) {
  RollingChecks c;
  c.applicability = applicability_residual(d.x0, d.x, d.grid);
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  auto rc = [&] { return cplx(nd(rng), nd(rng)); };
  for (const RollingPoint& p : d.pts) {
    const Jet2 j0 = d.x0.jet(p.u, p.v, false);
    const Jet2 j = d.x.jet(p.u, p.v, false);
    c.orthogonality = std::max(c.orthogonality, (p.R.transpose() * p.R - CMat3::Identity()).norm());
    c.det_dev = std::max(c.det_dev, std::abs(p.R.determinant() - 1.0));
    c.dx_match = std::max({c.dx_match, hnorm(j.xu - p.R * j0.xu), hnorm(j.xv - p.R * j0.xv)});
    const CMat3 ru = (rot_at(d.x0, d.x, p.u + h, p.v) - rot_at(d.x0, d.x, p.u - h, p.v)) / (2 * h);
    const CMat3 rv = (rot_at(d.x0, d.x, p.u, p.v + h) - rot_at(d.x0, d.x, p.u, p.v - h)) / (2 * h);
    const CMat3 rt = p.R.transpose();
    c.comp = std::max(c.comp, hnorm(rt * ru * j0.xv - rt * rv * j0.xu));
    c.om_normal = std::max({c.om_normal, std::abs(bdot(p.omega.du, p.n0)), std::abs(bdot(p.omega.dv, p.n0))});
    c.om_cross_dx0 = std::max(c.om_cross_dx0, hnorm(wedge_cross(p.omega, p.dx0)));
    const OneForm3 w1 = omega_route1(d.x0, d.x, p.u, p.v, h);
    c.routes = std::max({c.routes, hnorm(w1.du - p.omega.du), hnorm(w1.dv - p.omega.dv)});
    c.s_symmetry = std::max(c.s_symmetry, std::abs(p.s(0, 1) - p.s(1, 0)));

    // reflected roll R' = R (I - 2 N0 N0^T)
    const double hr = 1e-3;
    auto rref = [&](double a, double b) {
      const RollingPoint q = roll_point(d.x0, d.x, a, b, false);
      return CMat3(q.R * (CMat3::Identity() - 2.0 * q.n0 * q.n0.transpose()));
    };
    const CMat3 rp = rref(p.u, p.v);
    const CMat3 rpu = rdiff([&](double s) { return rref(p.u + s, p.v); }, hr);
    const CMat3 rpv = rdiff([&](double s) { return rref(p.u, p.v + s); }, hr);
    const CMat3 ou = rp.transpose() * rpu, ov = rp.transpose() * rpv;
    const CVec3 wu = alpha_inv(0.5 * (ou - ou.transpose()), 1e300);
    const CVec3 wv = alpha_inv(0.5 * (ov - ov.transpose()), 1e300);
    const CVec3 pu = -p.omega.du - 2.0 * cross(p.n0, p.dn0.du);
    const CVec3 pv = -p.omega.dv - 2.0 * cross(p.n0, p.dn0.dv);
    c.reflected = std::max({c.reflected, hnorm(wu - pu), hnorm(wv - pv)});

    // a = rho N0 x dx0 + normal parts satisfies a^T . dx0 = 0
    const cplx rho = rc(), al = rc(), be = rc();
    OneForm3 a{rho * cross(p.n0, p.dx0.du) + al * p.n0, rho * cross(p.n0, p.dx0.dv) + be * p.n0};
    c.aom = std::max(c.aom, std::abs(wedge_dot(a, p.omega)));
  }
  return c;
}

Flatness flatness_residuals(const SurfacePatch& x0, const SurfacePatch& x, const Grid& g, double h,
                            const OmegaPerturbation& perturb) {
  auto om = [&](double u, double v) {
    const RollingPoint p = roll_point(x0, x, u, v, false);
    OneForm3 w = p.omega;
    if (perturb) w = w + perturb(u, v, p);
    return std::pair<OneForm3, RollingPoint>(w, p);
  };
  Flatness f;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const double u = g.u(i), v = g.v(j);
      const auto [w, p] = om(u, v);
      const CVec3 dwv_du = (om(u + h, v).first.dv - om(u - h, v).first.dv) / (2 * h);
      const CVec3 dwu_dv = (om(u, v + h).first.du - om(u, v - h).first.du) / (2 * h);
      const CVec3 flat = dwv_du - dwu_dv + cross(w.du, w.dv);
      f.flatness = std::max(f.flatness, hnorm(flat));
      const cplx k = bdot(p.dn0.du, w.dv) - bdot(p.dn0.dv, w.du);
      f.omom = std::max(f.omom, hnorm(cross(w.du, w.dv) - k * p.n0));
    }
  return f;
}

}  // namespace bq
