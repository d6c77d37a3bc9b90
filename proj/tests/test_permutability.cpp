#include <doctest.h>

#include <cmath>

#include "bq/permutability.hpp"

using namespace bq;

namespace {

const Domain kDom{0.4, 1.2, 0.0, 1.0};

CMat3 spheroid_matrix() {
  CMat3 m = CMat3::Zero();
  m(0, 0) = 0.25;
  m(1, 1) = 0.25;
  m(2, 2) = 1.0;
  return m;
}

struct Fixture {
  Quadric q{spheroid_matrix()};
  ConfocalFamily fam{q};
  SeedPtr seed = rolled_seed(revolution_patch(spheroid_profile(2, 1), kDom),
                             bending_of_revolution(spheroid_profile(2, 1), 0.8, kDom), q);
};

RunPtr run_at_corner(const Fixture& f, cplx z, int n) {
  BacklundSpec s;
  s.z = z;
  s.v1_0 = 2.5;
  s.grid = Grid(kDom, n, n);
  s.base_u = kDom.u0;
  s.base_v = kDom.v0;
  return BacklundRun::integrate(f.seed, f.fam, s);
}

int realizing(const SitcResult& r) {
  for (int k = 0; k < 2; ++k)
    if (r.cand[k].realizes) return k;
  return -1;
}

}  // namespace

TEST_CASE("cross ratio of collinear points") {
  const CVec3 a(0.3, -1.0, 2.0), d(1.0, cplx(0.5, 0.2), -0.7);
  auto at = [&](cplx t) { return CVec3(a + t * d); };
  CHECK(std::abs(cross_ratio(at(0.0), at(3.0), at(1.0), at(2.0)) - 0.25) < 1e-14);
  // oracle: complex parameters
  CHECK(std::abs(cross_ratio(at(I1), at(2.0), at(1.0 + I1), at(-1.0)) + 1.5) < 1e-13);

  const RigidMotion g(cayley_rotation(CVec3(0.2, -0.4, 0.9)), CVec3(1, -2, 0.5));
  const cplx before = cross_ratio(at(0.1), at(1.7), at(-0.4), at(0.9));
  const cplx after = cross_ratio(g.apply(at(0.1)), g.apply(at(1.7)), g.apply(at(-0.4)), g.apply(at(0.9)));
  CHECK(std::abs(after - before) <= 1e-12);

  const CVec3 off = at(2.0) + 1e-3 * CVec3(0, 0, 1);
  CHECK_THROWS_AS(cross_ratio(at(0.0), at(3.0), at(1.0), off), Error);
}

TEST_CASE("Moebius incidence") {
  // n = 1: two points and two planes of the pencil through their join
  IncidenceConfig c1;
  c1.n = 1;
  c1.points = {CVec3(0, 0, 0), CVec3(1, 0, 0)};
  c1.planes = {{CVec3(0, 1, 0), 0.0}, {CVec3(0, 0, 1), 0.0}};
  const IncidenceReport r1 = mobius_incidence_check(c1);
  CHECK(r1.ok);
  CHECK(r1.point_counts == std::vector<int>{2, 2});

  // n = 2: regular tetrahedron and its faces
  IncidenceConfig c2;
  c2.n = 2;
  c2.points = {CVec3(1, 1, 1), CVec3(1, -1, -1), CVec3(-1, 1, -1), CVec3(-1, -1, 1)};
  for (int k = 0; k < 4; ++k) {
    // face opposite vertex k
    const CVec3& p = c2.points[(k + 1) % 4];
    const CVec3 nrm = cross(c2.points[(k + 2) % 4] - p, c2.points[(k + 3) % 4] - p);
    c2.planes.push_back({nrm, bdot(nrm, p)});
  }
  const IncidenceReport r2 = mobius_incidence_check(c2);
  CHECK(r2.ok);
  CHECK(r2.plane_counts == std::vector<int>{3, 3, 3, 3});

  // n = 3: eight generic points and planes
  IncidenceConfig c3;
  c3.n = 3;
  for (int k = 0; k < 8; ++k) {
    c3.points.push_back(CVec3(std::sin(k + 1.0), std::cos(2.0 * k), 0.3 * k));
    c3.planes.push_back({CVec3(std::cos(k + 0.5), 1.0, std::sin(3.0 * k)), 0.7 + k});
  }
  CHECK_FALSE(mobius_incidence_check(c3).ok);
}

TEST_CASE("SITC candidates and the cross ratio") {
  const Fixture f;
  const RunPtr r1 = run_at_corner(f, 1.5, 8), r2 = run_at_corner(f, 2.5, 8);
  const SeedPtr l1 = leaf_seed(r1), l2 = leaf_seed(r2);
  const SitcResult s = sitc_init(r1, r2, l1, l2);
  CHECK(s.cand.size() == 2);
  CHECK(std::abs(s.target - 0.6) < 1e-15);
  // both roots make x3 tangent to the second facet
  for (const SitcCandidate& c : s.cand) CHECK(c.second_tangency <= 1e-9);
  const int k = realizing(s);
  REQUIRE(k >= 0);
  CHECK(std::abs(s.cand[k].cross_ratio - s.target) <= 1e-8);
  CHECK(s.cand[k].facet_mismatch <= 1e-6);

  // swapping the parameters gives the reciprocal cross ratio
  const SitcResult w = sitc_init(r2, r1, l2, l1);
  CHECK(std::abs(w.target - 1.0 / 0.6) < 1e-14);
  const int kw = realizing(w);
  REQUIRE(kw >= 0);
  CHECK(std::abs(w.cand[kw].cross_ratio - w.target) <= 1e-8);
  // the same fourth point either way
  CHECK((w.cand[kw].x3 - s.cand[k].x3).norm() <= 1e-8);

  CHECK_THROWS_AS(sitc_init(r1, r1, l1, l1), Error);
}

TEST_CASE("BPT closes for the realizing candidate") {
  const Fixture f;
  BptOptions o;
  o.z1 = 1.5;
  o.z2 = 2.5;
  o.v1_0_1 = 2.5;
  o.v1_0_2 = 2.5;
  o.grid = Grid(kDom, 12, 12);
  o.base_u = kDom.u0;
  o.base_v = kDom.v0;
  o.refine = false;
  o.cr_samples = 20;
  o.choice = 1;
  const BptReport b = bpt_close(f.seed, f.fam, o);
  REQUIRE(b.integrated);
  CHECK(b.closure <= 1e-5);
  CHECK(b.cr_dev <= 1e-6);
  CHECK(b.cr_count >= 20);
  CHECK(b.mobius_ok);
  CHECK(b.same_family);

  // the quadrilateral cross ratio away from the base node
  CHECK(std::abs(quadrilateral_cross_ratio(*b.r1, *b.r2, *b.ra, 7, 5) - 0.6) <= 1e-6);

  o.z2 = 1.5;
  CHECK_THROWS_AS(bpt_close(f.seed, f.fam, o), Error);
}

TEST_CASE("cube rejects repeated parameters") {
  const Fixture f;
  CubeOptions o;
  o.z = {1.5, 2.5, 1.5};
  o.v1_0 = {2.5, 2.5, 3.0};
  o.grid = Grid(kDom, 6, 6);
  CHECK_THROWS_AS(titc_cube(f.seed, f.fam, o), Error);
}
