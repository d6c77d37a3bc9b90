#include <doctest.h>

#include <random>

#include "bq/quadric.hpp"

using namespace bq;

namespace {

std::mt19937_64 rng(11);
cplx rc() {
  std::uniform_real_distribution<double> d(-2, 2);
  return {d(rng), d(rng)};
}
CMat3 diag3(cplx a, cplx b, cplx c) {
  CMat3 m = CMat3::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}
// random (u, v) away from the pole u = v
std::pair<cplx, cplx> ruv() {
  for (;;) {
    const cplx u = rc(), v = rc();
    if (std::abs(u - v) > 0.5) return {u, v};
  }
}

}  // namespace

TEST_CASE("sphere chart values") {
  // oracle: X(1,-1) = (3/(2 sqrt2), i/(2 sqrt2), 0)
  const Jet2 x = sphere_chart(1.0, -1.0);
  CHECK(std::abs(x.x(0) - 1.0606601717798212) < 1e-15);
  CHECK(std::abs(x.x(1) - cplx(0, 0.3535533905932738)) < 1e-15);
  CHECK(std::abs(x.x(2)) < 1e-15);
  CHECK(std::abs(bsq(x.x) - 1.0) < 1e-15);
  CHECK((x.x - (f1() + 2.0 * f1bar()) / 2.0).norm() < 1e-15);

  // oracle: mixed derivative at (2, i)
  const Jet2 y = sphere_chart(2.0, I1);
  const CVec3 want(cplx(-0.2941564209736038, -0.2036467529817257), cplx(0.2941564209736038, 0.2036467529817257),
                   cplx(0.112, -0.384));
  CHECK((y.xuv - want).norm() < 1e-14);
  const cplx d = 2.0 - I1;
  CHECK((y.xuv + (2.0 / (d * d)) * y.x).norm() <= 1e-12);

  CHECK_THROWS_AS(sphere_chart(0.5, 0.5), Error);
}

TEST_CASE("sphere chart inverse") {
  for (int k = 0; k < 20; ++k) {
    const auto [u, v] = ruv();
    const auto [u2, v2] = sphere_chart_inverse(sphere_chart(u, v).x);
    CHECK(std::abs(u2 - u) < 1e-10);
    CHECK(std::abs(v2 - v) < 1e-10);
  }
}

TEST_CASE("isotropic cone") {
  CHECK(std::abs(bsq(cone_ruling(cplx(1, 2)).y)) < 1e-13);
  // paraboloid chart and the Z identity
  const Jet2 z = paraboloid_chart(cplx(0.3, 0.1), cplx(-0.7, 0.4));
  const CMat3 lhs = z.xu * z.xv.transpose() + z.xv * z.xu.transpose() - z.xuv * z.x.transpose() -
                    z.x * z.xuv.transpose();
  const CMat3 rhs = f1() * f1bar().transpose() + f1bar() * f1().transpose();
  CHECK((lhs - rhs).norm() < 1e-14);
}

TEST_CASE("confocal members") {
  const ConfocalFamily fam{Quadric(diag3(0.25, 0.5, 1.0))};
  // oracle: (diag(4,2,1) - I/2)^-1
  CHECK((fam.member(0.5).matrix() - diag3(0.2857142857142857, 0.6666666666666666, 2.0)).norm() < 1e-14);
  CHECK((fam.member(0.0).matrix() - fam.base().matrix()).norm() < 1e-15);
  const ConfocalFamily sph{Quadric(CMat3::Identity())};
  CHECK((sph.member(0.75).matrix() - 4.0 * CMat3::Identity()).norm() < 1e-14);
  CHECK_THROWS_AS(fam.member(2.0), Error);
}

TEST_CASE("singular parameters") {
  auto sp = ConfocalFamily{Quadric(diag3(0.25, 0.5, 1.0))}.singular_parameters();
  CHECK(std::abs(sp[0] - 1.0) < 1e-14);
  CHECK(std::abs(sp[1] - 2.0) < 1e-14);
  CHECK(std::abs(sp[2] - 4.0) < 1e-14);
  for (cplx s : ConfocalFamily{Quadric(CMat3::Identity())}.singular_parameters()) CHECK(std::abs(s - 1.0) < 1e-14);
  sp = ConfocalFamily{Quadric(diag3(0.25, 0.25, 1.0))}.singular_parameters();
  CHECK(std::abs(sp[0] - 1.0) < 1e-14);
  CHECK(std::abs(sp[1] - 4.0) < 1e-14);
  CHECK(std::abs(sp[2] - 4.0) < 1e-14);
}

TEST_CASE("symmetric square root") {
  CHECK((sym_sqrt(CMat3::Identity()) - CMat3::Identity()).norm() < 1e-14);
  CHECK((sym_sqrt(diag3(4, 9, 1)) - diag3(2, 3, 1)).norm() < 1e-14);
  CHECK_THROWS_AS(sym_sqrt(f1() * f1().transpose()), Error);
  double r = 0;
  for (int k = 0; k < 50; ++k) {
    CMat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rc();
    m = (m + m.transpose()).eval();
    const CMat3 s = sym_sqrt(m);
    r = std::max(r, (s * s - m).norm() / m.norm() + (s - s.transpose()).norm());
  }
  CHECK(r < 1e-10);
}

TEST_CASE("Ivory map") {
  const ConfocalFamily sph{Quadric(CMat3::Identity())};
  const CVec3 p = sph.ivory_map(0.75, e1());
  CHECK((p - 0.5 * e1()).norm() < 1e-15);
  CHECK(std::abs(sph.member(0.75).residual(p)) < 1e-14);
  const ConfocalFamily fam{Quadric(diag3(0.25, 0.5, 1.0))};
  const CVec3 q = CVec3(1.2, 0.3, 0.0);
  const CVec3 on = q / std::sqrt(bdot(q, fam.base().matrix() * q));
  CHECK((fam.ivory_map(0.0, on) - on).norm() < 1e-15);

  // two points on one ruling keep their distance
  const ConfocalPair pr = confocal_pair(ConfocalFamily{Quadric(diag3(0.25, 0.5, -1.0))}, 1.5);
  double r = 0;
  for (int k = 0; k < 50; ++k) {
    const auto [u, v] = ruv();
    const cplx u2 = u + rc();
    if (std::abs(u2 - v) < 0.5) continue;
    const CVec3 a = pr.base.point(u, v), b = pr.base.point(u2, v);
    const CVec3 ia = pr.ivory * a, ib = pr.ivory * b;
    r = std::max(r, std::abs(bsq(ia - ib) - bsq(a - b)) / std::max(1.0, std::abs(bsq(a - b))));
    r = std::max(r, (ia - pr.aux.point(u, v)).norm());
  }
  CHECK(r <= 1e-9);
}

TEST_CASE("ruling charts") {
  const RulingChart s = RulingChart::of(Quadric(CMat3::Identity()));
  CHECK((s.eval(0.3, -0.4).x - sphere_chart(0.3, -0.4).x).norm() < 1e-15);

  const Quadric q(diag3(0.25, cplx(0.5, 0.2), 1.0));
  const RulingChart c = RulingChart::of(q);
  double straight = 0, on = 0;
  for (int k = 0; k < 100; ++k) {
    const auto [u, v] = ruv();
    const Jet2 j = c.eval(u, v);
    if (k < 50) straight = std::max(straight, cross(j.xu, j.xuu).norm() + cross(j.xv, j.xvv).norm());
    on = std::max(on, std::abs(q.residual(j.x)));
    const auto [u2, v2] = c.locate(j.x);
    CHECK(std::abs(u2 - u) + std::abs(v2 - v) < 1e-8);
  }
  CHECK(straight <= 1e-11);
  CHECK(on <= 1e-11);
}

TEST_CASE("real ruling frame gives real points") {
  const auto m = real_ruling_frame(diag3(4.0, 2.0, -1.0));
  REQUIRE(m.has_value());
  const RulingChart c(Quadric(diag3(0.25, 0.5, -1.0)), *m);
  const CVec3 p = c.point(0.3, 1.7);
  CHECK(p.imag().norm() < 1e-14);
  CHECK_FALSE(real_ruling_frame(diag3(4.0, 2.0, 1.0)).has_value());
}

TEST_CASE("isotropic rulings") {
  CHECK(isotropic_rulings(Quadric(CMat3::Identity())).all_isotropic);

  const Quadric tri(diag3(0.25, 0.5, 1.0));
  const IsotropicRulings r = isotropic_rulings(tri);
  CHECK_FALSE(r.all_isotropic);
  REQUIRE(r.distinct.size() == 4);
  // oracle: roots of Y(v)^T diag(4,2,1) Y(v)
  const double want[4] = {-2.7320508075688794, -0.7320508075688771, 0.7320508075688774, 2.7320508075688785};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r.distinct[k] - want[k]) < 1e-10);
  const CMat3 ainv = tri.inverse();
  for (cplx v : r.distinct) {
    const CVec3 y = cone_ruling(v).y;
    CHECK(std::abs(bdot(y, ainv * y)) < 1e-10);
  }

  // spheroid: oracle quartic is -12 v^2, a double root at 0 and two at infinity
  const IsotropicRulings s = isotropic_rulings(Quadric(diag3(0.25, 0.25, 1.0)));
  int total = s.at_infinity;
  for (int m : s.multiplicity) total += m;
  CHECK(total == 4);
  REQUIRE(s.distinct.size() == 1);
  CHECK(std::abs(s.distinct[0]) < 1e-8);
  CHECK(s.multiplicity[0] == 2);
}

TEST_CASE("quadric Gauss curvature") {
  // oracle: spheroid (2 sin u cos v, 2 sin u sin v, cos u) at u = 1/2 and u = 1
  const Quadric q(diag3(0.25, 0.25, 1.0));
  const double us[2] = {0.5, 1.0}, want[2] = {0.09124835142614368, 0.28420801147735203};
  for (int k = 0; k < 2; ++k) {
    const CVec3 p(2 * std::sin(us[k]) * std::cos(0.3), 2 * std::sin(us[k]) * std::sin(0.3), std::cos(us[k]));
    CHECK(std::abs(q.gauss_curvature(p) - want[k]) < 1e-13);
  }
}
