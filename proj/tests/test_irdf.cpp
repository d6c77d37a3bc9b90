#include <doctest.h>

#include "bq/irdf.hpp"

using namespace bq;

namespace {

CMat3 diag3(double a, double b, double c) {
  CMat3 m = CMat3::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

struct Spheroid {
  Quadric q{diag3(0.25, 0.25, 1.0)};
  ConfocalFamily fam{q};
  ConfocalPair pr = confocal_pair(fam, 2.5);
  SurfacePatch x0 = revolution_patch(spheroid_profile(2, 1), Domain{0.4, 1.2, 0.0, 1.0});
  Lattice lat{0.6, 1.0, 0.3, 0.7, 2.3, 2.7, 5, 5, 5};
};

}  // namespace

TEST_CASE("general IC") {
  CHECK(ic_general_residual(sphere_family_field()).max() <= 1e-8);
  const Spheroid s;
  const FacetField f = confocal_facet_field(s.x0, s.q, s.pr.aux, 2.5, s.lat);
  CHECK(ic_general_residual(f).max() <= 1e-7);
  CHECK(ic_general_residual(perturbed_field(f, 0.01, 42)).max() > 1e-3);
}

TEST_CASE("symmetric TC") {
  const Spheroid s;
  const SymTcField f = confocal_symtc_field(s.x0, s.q, s.pr.aux, 2.5, s.lat);
  const SymTcResidual r = ic_symtc_residual(f);
  CHECK(r.eq1 <= 1e-7);
  CHECK(r.eq2 <= 1e-7);
  CHECK(ic_symtc_residual(shifted_mb(f, 0.1)).eq1 > 1e-3);
  CHECK_THROWS_AS(ic_symtc_residual(planar_symtc_field()), Error);
  try {
    ic_symtc_residual(planar_symtc_field());
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateField);
  }
}

TEST_CASE("Theorem 1 criterion") {
  const Spheroid s;
  const Theorem1Residual t = theorem1_residual(confocal_symtc_field(s.x0, s.q, s.pr.aux, 2.5, s.lat));
  CHECK(t.eqA <= 1e-6);
  CHECK(t.eqB <= 1e-6);
  CHECK(t.wcoco <= 1e-6);

  // non-confocal member: A + 0.01 (e1 e2^T + e2 e1^T)
  const RulingChart bad = perturbed_chart(s.pr.aux, 0.01);
  const Theorem1Residual b = theorem1_residual(confocal_symtc_field(s.x0, s.q, bad, 2.5, s.lat));
  CHECK(std::max({b.eqA, b.eqB, b.wcoco}) >= 1e-4);
  // the perturbed chart lives on the perturbed quadric
  const Quadric pq = perturbed_quadric(s.pr.aux.quadric(), 0.01);
  CHECK(std::abs(pq.residual(bad.point(0.3, -1.2))) < 1e-12);
}

TEST_CASE("integrability on a triaxial ellipsoid") {
  const Quadric q(diag3(1.0 / 9, 0.25, 1.0));
  const ConfocalPair pr = confocal_pair(ConfocalFamily(q), 2.5);
  const SurfacePatch ell = ellipsoid_patch(3, 2, 1, Domain{0.3, 2.8, 0.0, 6.0});
  const std::vector<TcSample> smp = tc_samples(ell, q, pr.aux, 200, 42);
  CHECK(smp.size() >= 150);
  CHECK(int_residual(chart_fn(pr.aux), smp) <= 1e-9);
  const FinaResult fi = fina_residual(chart_fn(pr.aux), smp);
  CHECK(fi.doubly_ruled);
  CHECK(fi.residual <= 1e-11);

  // scaling x_z by 1.01 breaks confocality
  const RulingChart sc(Quadric(pr.aux.quadric().matrix() / (1.01 * 1.01)), pr.aux.frame() * 1.01);
  CHECK(int_residual(chart_fn(sc), tc_samples(ell, q, sc, 200, 42)) >= 1e-4);
}

TEST_CASE("integrability on a concentric sphere pair") {
  const Quadric q(CMat3::Identity());
  const ConfocalPair pr = confocal_pair(ConfocalFamily(q), -0.5);
  const SurfacePatch sph = sphere_patch(1, Domain{0.3, 2.8, 0.0, 6.0});
  CHECK(int_residual(chart_fn(pr.aux), tc_samples(sph, q, pr.aux, 200, 42)) <= 1e-10);
}

TEST_CASE("torus auxiliary is not doubly ruled") {
  const ChartFn tor = torus_chart(3, 1);
  const FinaResult f = fina_residual(tor, synthetic_tc_samples(tor, 50, 42));
  CHECK_FALSE(f.doubly_ruled);
  CHECK(f.straight_u > 1e-3);
}

TEST_CASE("rigidity grows linearly") {
  const Spheroid s;
  double prev = 0;
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    const RulingChart c = perturbed_chart(s.pr.aux, eps);
    const double r = int_residual(chart_fn(c), tc_samples(s.x0, s.q, c, 200, 42));
    if (prev > 0) {
      CHECK(r / prev >= 10.0 / 3);
      CHECK(r / prev <= 30.0);
    }
    prev = r;
  }
  CHECK(int_residual(chart_fn(perturbed_chart(s.pr.aux, 0.0)), tc_samples(s.x0, s.q, s.pr.aux, 200, 42)) <= 1e-12);
}
