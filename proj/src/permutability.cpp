#include "bq/permutability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bq {

namespace {

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// parameter s of the meet of x1 + s (x2 - x1) with p + r e
cplx meet(const CVec3& x1, const CVec3& x2, const CVec3& p, const CVec3& e) {
  Eigen::Matrix<cplx, 3, 2> m;
  m.col(0) = x2 - x1;
  m.col(1) = -e;
  const CVec3 rhs = p - x1;
  const Eigen::Matrix<cplx, 2, 1> sol = m.colPivHouseholderQr().solve(rhs);
  const double res = (m * sol - rhs).norm();
  if (res > 1e-7 * std::max(1.0, rhs.norm())) throw Error(Errc::NoRealization, "ruling misses the segment");
  return sol(0);
}

CVec3 unitish(const CVec3& v) { return v / v.norm(); }

double x1_distance(const BacklundRun& a, const BacklundRun& b) {
  double d = 0;
  for (int i = 0; i < a.grid().nu; ++i)
    for (int j = 0; j < a.grid().nv; ++j) d = std::max(d, hnorm(a.node(i, j).x1 - b.node(i, j).x1));
  return d;
}

}  // namespace

cplx cross_ratio(const CVec3& p1, const CVec3& p2, const CVec3& p3, const CVec3& p4, double tol) {
  const CVec3 d = p2 - p1;
  const double dd = d.squaredNorm();
  if (dd == 0.0) throw Error(Errc::NotCollinear, "first two points coincide");
  std::array<cplx, 4> t{0.0, 1.0, 0.0, 0.0};
  const std::array<const CVec3*, 2> rest{&p3, &p4};
  for (int k = 0; k < 2; ++k) {
    const CVec3 w = *rest[k] - p1;
    const cplx s = d.dot(w) / dd;  // Hermitian projection, only to locate the point on the line
    if ((w - s * d).norm() > tol * std::max(1.0, rest[k]->norm())) throw Error(Errc::NotCollinear, "point off the line");
    t[2 + k] = s;
  }
  return ((t[0] - t[2]) * (t[1] - t[3])) / ((t[0] - t[3]) * (t[1] - t[2]));
}

IncidenceReport mobius_incidence_check(const IncidenceConfig& c, double tol) {
  IncidenceReport r;
  const size_t n = size_t(1) << c.n;
  if (c.points.size() != n || c.planes.size() != n) return r;
  r.point_counts.assign(n, 0);
  r.plane_counts.assign(n, 0);
  for (size_t p = 0; p < n; ++p)
    for (size_t q = 0; q < n; ++q)
      if (std::abs(bdot(c.planes[q].normal, c.points[p]) - c.planes[q].offset) <= tol) {
        ++r.point_counts[p];
        ++r.plane_counts[q];
      }
  r.ok = std::all_of(r.point_counts.begin(), r.point_counts.end(), [&](int k) { return k == c.n + 1; }) &&
         std::all_of(r.plane_counts.begin(), r.plane_counts.end(), [&](int k) { return k == c.n + 1; });
  return r;
}

cplx quadrilateral_cross_ratio(const BacklundRun& r1, const BacklundRun& r2, const BacklundRun& ra, int i, int j) {
  const LeafPoint& l1 = r1.node(i, j);
  const LeafPoint& l2 = r2.node(i, j);
  const LeafPoint& la = ra.node(i, j);
  const auto [u0, v0] = r1.pair().base.locate(l1.seed.x0);
  const CVec3 e0 = l1.seed.R * r1.pair().base.eval(u0, v0).xu;
  const CVec3 e3 = la.seed.R * la.tc.chart.xu;
  const cplx s0 = meet(l1.x1, l2.x1, l1.xs, e0);
  const cplx s3 = meet(l1.x1, l2.x1, la.x1, e3);
  const CVec3 d = l2.x1 - l1.x1;
  return cross_ratio(l1.x1, l2.x1, CVec3(l1.x1 + s0 * d), CVec3(l1.x1 + s3 * d));
}

SitcResult sitc_init(const RunPtr& run1, const RunPtr& run2, const SeedPtr& leaf1, const SeedPtr& leaf2) {
  if (std::abs(run1->z() - run2->z()) <= 1e-12 * std::max(1.0, std::abs(run1->z())))
    throw Error(Errc::InvalidArgument, "z1 = z2");
  const int bi = run1->base_i(), bj = run1->base_j();
  if (bi != run2->base_i() || bj != run2->base_j()) throw Error(Errc::InvalidArgument, "runs need a common base node");
  const double u = run1->grid().u(bi), v = run1->grid().v(bj);
  const SeedSample s1 = leaf1->sample(u, v, true);
  const SeedSample s2 = leaf2->sample(u, v, true);
  const LeafPoint& n1 = run1->node(bi, bj);
  const LeafPoint& n2 = run2->node(bi, bj);
  const CVec3 x2 = n2.x1;
  const CVec3 nx2 = unit(s2.R * s2.n0);
  const RulingChart& aux2 = run2->pair().aux;
  const RulingChart& aux1 = run1->pair().aux;
  const CMat3 rm = s1.R * aux2.frame();
  const CVec3 n = aux2.frame().transpose() * s1.n0;
  const cplx p = bdot(s1.n0, s1.x0);
  const cplx nf = bdot(n, f1()), nfb = bdot(n, f1bar()), ne = bdot(n, e3());
  // c (u - v) (x3(v) - x2) . nx2 with u = alpha / c is quadratic in v
  auto g = [&](cplx w) {
    const cplx al = -(2.0 * nfb + w * (ne + p));
    const cplx c = ne - p - w * nf;
    const CVec3 y = rm * (-al * w * f1() + 2.0 * c * f1bar() + (al + w * c) * e3()) + (s1.t - x2) * (al - w * c);
    return bdot(nx2, y);
  };
  const cplx g0 = g(0.0), gp = g(1.0), gm = g(-1.0);
  const cplx c0 = g0, c1 = 0.5 * (gp - gm), c2 = 0.5 * (gp + gm) - g0;
  const double mag = std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
  if (std::abs(c2) <= 1e-12 * mag) throw Error(Errc::NoRealization, "tangency condition is not quadratic here");
  const cplx disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  const cplx qa = -0.5 * (c1 + disc), qb = -0.5 * (c1 - disc);
  const cplx q = std::abs(qa) >= std::abs(qb) ? qa : qb;
  std::array<cplx, 2> roots{q / c2, c0 / q};
  std::sort(roots.begin(), roots.end(), lex_less);

  SitcResult out;
  out.target = run1->z() / run2->z();
  out.convention =
      "CR(x1, x2; l0, l3) = ((a-c)(b-d))/((a-d)(b-c)); l0 = u-ruling of the base quadric at the seed point, "
      "l3 = u-ruling of x_z2 at x3, both rolled into space";
  const auto [u0, v0] = run1->pair().base.locate(n1.seed.x0);
  const CVec3 e0 = n1.seed.R * run1->pair().base.eval(u0, v0).xu;
  for (int k = 0; k < 2; ++k) {
    SitcCandidate& c = out.cand[k];
    c.v = roots[k];
    const TangencySolution ta = tangency_solve(aux2, s1.x0, s1.n0, c.v);
    c.u = ta.u1;
    c.x3 = s1.R * ta.chart.x + s1.t;
    c.second_tangency = std::abs(bdot(nx2, c.x3 - x2));
    const CVec3 y = s2.R.transpose() * (c.x3 - s2.t);
    c.consistency = std::abs(aux1.quadric().residual(y));
    c.realizes = c.consistency <= 1e-8;
    try {
      c.v_route_b = aux1.locate(y).second;
      const TangencySolution tb = tangency_solve(aux1, s2.x0, s2.n0, c.v_route_b);
      const CVec3 na = s1.R * cross(ta.chart.xu, ta.V);
      const CVec3 nb = s2.R * cross(tb.chart.xu, tb.V);
      c.facet_mismatch = cross(unitish(na), unitish(nb)).norm();
    } catch (const Error&) {
      c.v_route_b = std::numeric_limits<double>::quiet_NaN();
      c.facet_mismatch = std::numeric_limits<double>::infinity();
    }
    try {
      const CVec3 e3v = s1.R * ta.chart.xu;
      const cplx a0 = meet(n1.x1, x2, n1.xs, e0);
      const cplx a3 = meet(n1.x1, x2, c.x3, e3v);
      const CVec3 d = x2 - n1.x1;
      c.cross_ratio = cross_ratio(n1.x1, x2, CVec3(n1.x1 + a0 * d), CVec3(n1.x1 + a3 * d));
    } catch (const Error&) {
      c.cross_ratio = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

namespace {

struct Quad {
  RunPtr r1, r2, ra, rb;
  SitcResult sitc;
};

BacklundSpec spec_for(const BptOptions& o, cplx z, cplx v10, const Grid& g, bool column) {
  BacklundSpec s;
  s.z = z;
  s.v1_0 = v10;
  s.grid = g;
  s.base_u = o.base_u;
  s.base_v = o.base_v;
  s.column_pass = column;
  return s;
}

}  // namespace

BptReport bpt_close(const SeedPtr& seed, const ConfocalFamily& fam, const BptOptions& opt) {
  if (std::abs(opt.z1 - opt.z2) <= 1e-12 * std::max(1.0, std::abs(opt.z1)))
    throw Error(Errc::InvalidArgument, "z1 = z2");
  BptReport rep;
  rep.choice = opt.choice;
  auto build = [&](const Grid& g, BptReport& r) {
    r.r1 = BacklundRun::integrate(seed, fam, spec_for(opt, opt.z1, opt.v1_0_1, g, true));
    r.r2 = BacklundRun::integrate(seed, fam, spec_for(opt, opt.z2, opt.v1_0_2, g, true));
    const SeedPtr l1 = leaf_seed(r.r1), l2 = leaf_seed(r.r2);
    r.sitc = sitc_init(r.r1, r.r2, l1, l2);
    const SitcCandidate& c = r.sitc.cand[opt.choice];
    try {
      r.ra = BacklundRun::integrate(l1, r.r2->pair(), spec_for(opt, opt.z2, c.v, g, false));
      r.rb = BacklundRun::integrate(l2, r.r1->pair(), spec_for(opt, opt.z1, c.v_route_b, g, false));
      r.integrated = true;
      r.closure = x1_distance(*r.ra, *r.rb);
    } catch (const Error& e) {
      r.integrated = false;
      r.failure = e.what();
      r.closure = std::numeric_limits<double>::infinity();
    }
  };
  build(opt.grid, rep);
  rep.closed = rep.closure <= opt.threshold;
  if (rep.integrated) {
    const Grid& g = opt.grid;
    const int total = g.size();
    const int stride = std::max(1, total / std::max(1, opt.cr_samples));
    for (int k = 0; k < total && rep.cr_count < opt.cr_samples; k += stride) {
      const int i = k / g.nv, j = k % g.nv;
      double dev;
      try {
        dev = std::abs(quadrilateral_cross_ratio(*rep.r1, *rep.r2, *rep.ra, i, j) - rep.sitc.target);
      } catch (const Error&) {
        dev = std::numeric_limits<double>::infinity();
      }
      rep.cr_dev = std::max(rep.cr_dev, dev);
      ++rep.cr_count;
    }
    const int bi = rep.r1->base_i(), bj = rep.r1->base_j();
    IncidenceConfig ic;
    ic.n = 2;
    const LeafPoint& p1 = rep.r1->node(bi, bj);
    const LeafPoint& p2 = rep.r2->node(bi, bj);
    const LeafPoint& p3 = rep.ra->node(bi, bj);
    ic.points = {p1.xs, p1.x1, p2.x1, p3.x1};
    for (const auto& [x, nn] : std::array<std::pair<CVec3, CVec3>, 4>{
             {{p1.xs, p1.ns}, {p1.x1, p1.n1}, {p2.x1, p2.n1}, {p3.x1, p3.n1}}})
      ic.planes.push_back({nn, bdot(nn, x)});
    rep.mobius_ok = mobius_incidence_check(ic, 1e-8).ok;
    rep.same_family = rep.sitc.cand[opt.choice].facet_mismatch <= 1e-6;
  }
  if (opt.refine && rep.integrated) {
    Grid g2(opt.grid.dom, 2 * opt.grid.nu, 2 * opt.grid.nv);
    BptReport fine;
    build(g2, fine);
    rep.refined_closure = fine.closure;
    rep.refinement_factor = fine.closure > 0 ? rep.closure / fine.closure : std::numeric_limits<double>::infinity();
  }
  return rep;
}

CubeReport titc_cube(const SeedPtr& seed, const ConfocalFamily& fam, const CubeOptions& opt) {
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (std::abs(opt.z[a] - opt.z[b]) <= 1e-12 * std::max(1.0, std::abs(opt.z[a])))
        throw Error(Errc::InvalidArgument, "spectral parameters must be distinct");
  CubeReport rep;
  auto spec = [&](cplx z, cplx v10, bool column) {
    BacklundSpec s;
    s.z = z;
    s.v1_0 = v10;
    s.grid = opt.grid;
    s.base_u = opt.base_u;
    s.base_v = opt.base_v;
    s.column_pass = column;
    return s;
  };
  // first level: x1, x2, x4
  std::array<RunPtr, 3> r;
  std::array<SeedPtr, 3> l;
  for (int k = 0; k < 3; ++k) {
    r[k] = BacklundRun::integrate(seed, fam, spec(opt.z[k], opt.v1_0[k], false));
    l[k] = leaf_seed(r[k]);
  }
  // second level, one quadrilateral per face through x0
  struct Face {
    RunPtr ra, rb;  // ra = B_{zb}(x_a), rb = B_{za}(x_b)
    SitcResult s;
  };
  auto face = [&](int a, int b) {
    Face f;
    f.s = sitc_init(r[a], r[b], l[a], l[b]);
    const SitcCandidate& c = f.s.cand[f.s.cand[0].realizes ? 0 : 1];
    f.ra = BacklundRun::integrate(l[a], r[b]->pair(), spec(opt.z[b], c.v, false));
    f.rb = BacklundRun::integrate(l[b], r[a]->pair(), spec(opt.z[a], c.v_route_b, false));
    return f;
  };
  const Face f01 = face(0, 1), f12 = face(1, 2), f20 = face(2, 0);
  rep.face_cr = {f01.s.cand[f01.s.cand[0].realizes ? 0 : 1].cross_ratio,
                 f12.s.cand[f12.s.cand[0].realizes ? 0 : 1].cross_ratio,
                 f20.s.cand[f20.s.cand[0].realizes ? 0 : 1].cross_ratio};
  rep.face_target = {f01.s.target, f12.s.target, f20.s.target};
  for (int k = 0; k < 3; ++k) rep.face_cr_dev = std::max(rep.face_cr_dev, std::abs(rep.face_cr[k] - rep.face_target[k]));
  rep.face_closure = {x1_distance(*f01.ra, *f01.rb), x1_distance(*f12.ra, *f12.rb), x1_distance(*f20.ra, *f20.rb)};

  // x3 = B_{z2}(x1), x5 = B_{z3}(x1) via f20.rb, x6 = B_{z3}(x2)
  const RunPtr x3a = f01.ra;  // seed x1
  const RunPtr x5a = f20.rb;  // B_{z3}(x1), seed x1
  const RunPtr x3b = f01.rb;  // B_{z1}(x2), seed x2
  const RunPtr x6a = f12.ra;  // B_{z3}(x2), seed x2
  const SeedPtr L3a = leaf_seed(x3a), L5a = leaf_seed(x5a), L3b = leaf_seed(x3b), L6a = leaf_seed(x6a);
  // over x1: x7 = B_{z3}(x3) = B_{z2}(x5)
  const SitcResult s1 = sitc_init(x3a, x5a, L3a, L5a);
  const SitcCandidate& c1 = s1.cand[s1.cand[0].realizes ? 0 : 1];
  const RunPtr x7a = BacklundRun::integrate(L3a, x5a->pair(), spec(opt.z[2], c1.v, false));
  const RunPtr x7b = BacklundRun::integrate(L5a, x3a->pair(), spec(opt.z[1], c1.v_route_b, false));
  // over x2: x7 = B_{z1}(x6)
  const SitcResult s2 = sitc_init(x3b, x6a, L3b, L6a);
  const SitcCandidate& c2 = s2.cand[s2.cand[0].realizes ? 0 : 1];
  const RunPtr x7c = BacklundRun::integrate(L6a, x3b->pair(), spec(opt.z[0], c2.v_route_b, false));
  rep.pair_discrepancy = {x1_distance(*x7a, *x7b), x1_distance(*x7b, *x7c), x1_distance(*x7c, *x7a)};
  rep.x7_discrepancy = *std::max_element(rep.pair_discrepancy.begin(), rep.pair_discrepancy.end());
  return rep;
}

}  // namespace bq
