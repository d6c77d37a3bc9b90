#include <doctest.h>

#include <random>

#include "bq/backlund.hpp"

using namespace bq;

namespace {

const Domain kDom{0.4, 1.2, 0.0, 1.0};

CMat3 diag3(cplx a, cplx b, cplx c) {
  CMat3 m = CMat3::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

struct Fixture {
  Quadric q{diag3(0.25, 0.25, 1.0)};
  ConfocalFamily fam{q};
  SurfacePatch x0 = revolution_patch(spheroid_profile(2, 1), kDom);
  SurfacePatch x = bending_of_revolution(spheroid_profile(2, 1), 0.8, kDom);
};

BacklundSpec spec_for(cplx z, cplx v1_0, int n) {
  BacklundSpec s;
  s.z = z;
  s.v1_0 = v1_0;
  s.grid = Grid(kDom, n, n);
  s.base_u = s.grid.u(n / 2);
  s.base_v = s.grid.v(n / 2);
  return s;
}

}  // namespace

TEST_CASE("tangency on the unit sphere") {
  const ConfocalFamily sph{Quadric(CMat3::Identity())};
  const RulingChart c = RulingChart::of(sph.member(0.75));
  // closed form: (u1 + 1)/(2 (u1 - 1)) = 1
  const TangencySolution s = tangency_solve(c, e3(), e3(), 1.0);
  CHECK(std::abs(s.u1 - 3.0) < 1e-12);
  CHECK(std::abs(bdot(s.V, e3())) <= 1e-11);

  // oracle: sympy solve at a general point
  const double th = 0.7, ph = 0.3;
  const CVec3 p(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
  const TangencySolution g = tangency_solve(c, p, p, cplx(0.4, 0.2));
  CHECK(std::abs(g.u1 - cplx(1.3885983197555958, 0.5404139193097564)) < 1e-12);
  CHECK((g.V - (g.chart.x - p)).norm() < 1e-14);

  // v1 = 0 puts the ruling direction Y(0) in the plane z = const
  CHECK_THROWS_AS(tangency_solve(c, e3(), e3(), 0.0), Error);
}

TEST_CASE("m fields on the spheroid pair") {
  Fixture f;
  const cplx z = 2.5;
  const ConfocalPair pr = confocal_pair(f.fam, z);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> du(0.45, 1.15), dv(0.0, 1.0), dw(-2, 2);
  double sym = 0, refl = 0, tc = 0, orth = 0, rm = 0;
  for (int k = 0; k < 100; ++k) {
    const double u = du(rng), v = dv(rng);
    const Geometry g = eval_geometry(f.x0, u, v);
    const CVec3 p = f.x0.point(u, v);
    const cplx v1(dw(rng), 0.3 * dw(rng));
    TangencySolution s;
    try {
      s = tangency_solve(pr.aux, p, g.n, v1);
    } catch (const Error&) {
      continue;
    }
    const MFields m = m_fields(s, g.n, z);
    const double sc = std::max(1.0, m.m.norm() * s.V.norm());
    sym = std::max(sym, std::abs(bdot(m.m, s.V)) / sc);
    tc = std::max(tc, std::abs(bdot(s.V, g.n)));
    const CMat3 h = CMat3::Identity() - 2.0 * g.n * g.n.transpose();
    const double ms = std::max(1.0, m.m.norm() * s.chart.xv.norm());
    refl = std::max(refl, (std::abs(bdot(m.m, s.chart.xu)) + std::abs(bdot(m.m, h * s.chart.xv))) / ms);
    const Rmpia r = rmpia(pr, p, g.n, s);
    orth = std::max(orth, r.orthogonality);
    rm = std::max(rm, r.reflection);
  }
  CHECK(tc <= 1e-11);
  CHECK(sym <= 1e-11);
  CHECK(refl <= 1e-9);
  CHECK(orth <= 1e-9);
  CHECK(rm <= 1e-9);
}

TEST_CASE("m is quadratic in v1") {
  Fixture f;
  const ConfocalPair pr = confocal_pair(f.fam, 2.5);
  const Geometry g = eval_geometry(f.x0, 0.7, 0.4);
  const CVec3 p = f.x0.point(0.7, 0.4);
  Eigen::MatrixXcd V(9, 3), Y(9, 3);
  for (int k = 0; k < 9; ++k) {
    const cplx v1(1.5 + 0.2 * k, 0.1 * k);
    const MFields m = m_fields(tangency_solve(pr.aux, p, g.n, v1), g.n, 2.5);
    V.row(k) << 1.0, v1, v1 * v1;
    Y.row(k) = m.m.transpose();
  }
  const Eigen::MatrixXcd c = V.colPivHouseholderQr().solve(Y);
  CHECK((V * c - Y).norm() / Y.norm() <= 1e-8);
}

TEST_CASE("trivial run: seed is the quadric itself") {
  Fixture f;
  const SeedPtr seed = rolled_seed(f.x0, f.x0, f.q);
  const BacklundSpec spec = spec_for(2.5, 2.5, 12);
  const RunPtr run = BacklundRun::integrate(seed, f.fam, spec);
  double spread = 0;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) spread = std::max(spread, std::abs(run->v1(i, j) - 2.5));
  CHECK(spread <= 1e-14);
  // every leaf point lies on the ruling v1 = 2.5 of x_z
  const LeafPoint& b = run->node(run->base_i(), run->base_j());
  const CVec3 dir = run->pair().aux.eval(b.tc.u1, 2.5).xu;
  for (int i = 0; i < 12; ++i) {
    const LeafPoint& l = run->node(i, 5);
    CHECK(cross(l.x1 - b.x1, dir).norm() / dir.norm() <= 1e-12);
    CHECK((l.x1 - run->pair().aux.point(l.tc.u1, 2.5)).norm() <= 1e-12);
  }
  CheckOptions o;
  o.weingarten = false;
  const LeafChecks c = leaf_checks(*run, o);
  CHECK(c.linel <= 1e-9);
  CHECK(c.acpia <= 1e-9);
  o.weingarten = true;
  CHECK_THROWS_AS(leaf_checks(*run, o), Error);
}

TEST_CASE("full run on the bent spheroid") {
  Fixture f;
  const SeedPtr seed = rolled_seed(f.x0, f.x, f.q);
  const RunPtr run = BacklundRun::integrate(seed, f.fam, spec_for(2.5, 2.5, 16));
  CHECK(run->tc_residual() <= 1e-9);
  CHECK(run->path_independence() <= 1e-6);
  const LeafChecks c = leaf_checks(*run);
  CHECK(c.linel <= 1e-6);
  CHECK(c.acpia <= 1e-6);
  CHECK(c.weingarten <= 1e-5);
  CHECK(c.join_seed <= 1e-8);
  CHECK(c.join_leaf <= 1e-8);
  CHECK(c.leaf_tangency <= 1e-6);
  CHECK(ricatti_quadratic_residual(*run, 3, 4) <= 1e-10);

  // v1 actually moves on a bent seed
  CHECK(std::abs(run->v1(0, 0) - run->v1(15, 15)) > 1e-3);
  // off-grid evaluation agrees with the stored node
  const LeafPoint l = run->leaf_at(run->grid().u(5), run->grid().v(7));
  CHECK((l.x1 - run->node(5, 7).x1).norm() < 1e-8);

  SUBCASE("negative controls") {
    CheckOptions o;
    o.stride = 3;
    o.linel_z = cplx(2.6);
    CHECK(leaf_checks(*run, o).linel > 1e-3);
    o = CheckOptions{};
    o.stride = 3;
    o.normal_offset = 0.01;
    CHECK(leaf_checks(*run, o).weingarten > 1e-3);
    o = CheckOptions{};
    o.stride = 3;
    o.acpia_identity = true;
    CHECK(leaf_checks(*run, o).acpia > 1e-3);
  }
}

TEST_CASE("reflected family and leaf seeds") {
  Fixture f;
  const SeedPtr seed = rolled_seed(f.x0, f.x, f.q);
  // v1_0 = -1 keeps this leaf away from the chart pole
  BacklundSpec s = spec_for(2.5, -1.0, 12);
  s.family = Family::BPrime;
  const RunPtr run = BacklundRun::integrate(seed, f.fam, s);
  CHECK(run->path_independence() <= 1e-6);
  const LeafChecks c = leaf_checks(*run);
  CHECK(c.linel <= 1e-6);
  CHECK(c.weingarten <= 1e-5);
  CHECK(run->node(3, 3).seed.R.determinant().real() < 0);

  const RunPtr r1 = BacklundRun::integrate(seed, f.fam, spec_for(1.5, 2.5, 10));
  const SeedPtr ls = leaf_seed(r1);
  const SeedSample a = ls->sample(0.8, 0.5, true);
  CHECK(is_orthogonal(a.R, 1e-8));
}

TEST_CASE("preconditions") {
  Fixture f;
  const SeedPtr seed = rolled_seed(f.x0, f.x, f.q);
  CHECK_THROWS_AS(BacklundRun::integrate(seed, f.fam, spec_for(0.0, 2.5, 6)), Error);
  CHECK_THROWS_AS(BacklundRun::integrate(seed, f.fam, spec_for(4.0, 2.5, 6)), Error);
}
