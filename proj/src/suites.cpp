#include "bq/suites.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

namespace bq {

bool SuiteReport::pass() const {
  if (!error.empty()) return false;
  for (const Check& c : checks)
    if (!c.pass()) return false;
  return true;
}

const Check* SuiteReport::find(const std::string& tag) const {
  for (const Check& c : checks)
    if (c.tag == tag) return &c;
  return nullptr;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "ivory",    "roll",     "backlund",
                                              "bpt",        "cube",     "check-ic", "rigidity"};
  return names;
}

SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg) {
  using Fn = SuiteReport (*)(const ExperimentConfig&);
  static const std::map<std::string, Fn> table{
      {"identities", suite_identities}, {"ivory", suite_ivory},       {"roll", suite_roll},
      {"backlund", suite_backlund},     {"bpt", suite_bpt},           {"cube", suite_cube},
      {"check-ic", suite_check_ic},     {"rigidity", suite_rigidity},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown suite " + name);
  try {
    return it->second(cfg);
  } catch (const Error& e) {
    SuiteReport r;
    r.suite = name;
    r.error = std::string(errc_name(e.code())) + ": " + e.what();
    return r;
  }
}

SurfacePatch fixture_base(const ExperimentConfig& cfg) {
  return revolution_patch(spheroid_profile(cfg.profile_a, cfg.profile_b), cfg.domain);
}

SurfacePatch fixture_surface(const ExperimentConfig& cfg) {
  if (cfg.fixture == "identity") return fixture_base(cfg);
  return bending_of_revolution(spheroid_profile(cfg.profile_a, cfg.profile_b), cfg.bend, cfg.domain);
}

SeedPtr fixture_seed(const ExperimentConfig& cfg) {
  const double a2 = 1.0 / (cfg.profile_a * cfg.profile_a), b2 = 1.0 / (cfg.profile_b * cfg.profile_b);
  CMat3 expect = CMat3::Zero();
  expect(0, 0) = a2;
  expect(1, 1) = a2;
  expect(2, 2) = b2;
  if ((cfg.quadric - expect).norm() > 1e-12 * expect.norm())
    throw ConfigError("quadric does not match the fixture profile diag(1/a^2, 1/a^2, 1/b^2)");
  return rolled_seed(fixture_base(cfg), fixture_surface(cfg), Quadric(cfg.quadric));
}

Grid fixture_grid(const ExperimentConfig& cfg) { return Grid(cfg.domain, cfg.nu, cfg.nv); }

json report_json(const SuiteReport& r, const json& config_echo, const std::string& timestamp) {
  json res = json::object(), lim = json::object();
  for (const Check& c : r.checks) {
    res[c.tag] = c.value;
    json l = json::object();
    if (std::isfinite(c.lo)) l["lo"] = c.lo;
    if (std::isfinite(c.hi)) l["hi"] = c.hi;
    l["pass"] = c.pass();
    lim[c.tag] = l;
  }
  json j = {{"suite", r.suite},   {"pass", r.pass()},          {"residuals", res},  {"limits", lim},
            {"data", r.data},     {"config_echo", config_echo}, {"timestamp", timestamp}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

void write_csv(const CsvTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "u,v,x_re,x_im,y_re,y_im,z_re,z_im\n";
  out << std::setprecision(17);
  for (const CsvPoint& p : t.rows) {
    out << p.u << ',' << p.v;
    for (int k = 0; k < 3; ++k) out << ',' << p.x(k).real() << ',' << p.x(k).imag();
    out << '\n';
  }
  if (!out) throw ConfigError("cannot write " + path);
}

namespace {

struct Sampler {
  std::mt19937_64 g;
  std::uniform_real_distribution<double> d{-1.0, 1.0};
  explicit Sampler(std::uint64_t seed) : g(seed) {}
  double r() { return d(g); }
  cplx c() { return {r(), r()}; }
  CVec3 v() { return CVec3(c(), c(), c()); }
  OneForm3 w() { return {v(), v()}; }
  // chart parameters away from the pole
  std::pair<cplx, cplx> uv() {
    for (;;) {
      const cplx u = 2.0 * c(), v = 2.0 * c();
      if (std::abs(u - v) >= 0.5) return {u, v};
    }
  }
};

double fnorm(const OneForm3& w) { return w.du.norm() + w.dv.norm(); }

CMat3 outer(const CVec3& a, const CVec3& b) { return a * b.transpose(); }

}  // namespace

SuiteReport suite_identities(const ExperimentConfig& cfg) {
  SuiteReport r;
  r.suite = "identities";
  Sampler s(cfg.seed);
  const int n = cfg.samples;
  double bc = 0, che = 0, ched = 0, ac = 0, ai = 0, ae = 0, ri = 0;
  double xs = 0, xn = 0, xuv = 0, zp = 0, cone = 0, swap = 0, rl = 0;
  for (int k = 0; k < n; ++k) {
    const CVec3 a = s.v(), b = s.v();
    bc = std::max(bc, std::abs(bdot(a, cross(a, b))) / (a.squaredNorm() * b.norm()));
    const OneForm3 w1 = s.w(), w2 = s.w();
    const double sc = a.norm() * b.norm() * fnorm(w1) * fnorm(w2);
    che = std::max(che, std::abs(che_residual(a, b, w1, w2)) / sc);
    const cplx lhs = wedge(pair(a, w1), pair(b, w1));
    const cplx rhs = 0.5 * bdot(cross(a, b), wedge_cross(w1, w1));
    ched = std::max(ched, std::abs(lhs - rhs) / (a.norm() * b.norm() * fnorm(w1) * fnorm(w1)));
    ac = std::max(ac, (alpha(a) * b - cross(a, b)).norm() / (a.norm() * b.norm()));
    ai = std::max(ai, std::abs(mat_inner(alpha(a), alpha(b)) - bdot(a, b)) / (a.norm() * b.norm()));
    const CMat3 R = cayley_rotation(0.5 * s.v());
    ae = std::max(ae, (alpha(R * a) - R * alpha(a) * R.transpose()).norm() / (R.squaredNorm() * a.norm()));
    const RigidMotion g(R, s.v());
    const CVec3 p = s.v(), q = s.v();
    ri = std::max(ri, std::abs(bsq(g.apply(p) - g.apply(q)) - bsq(p - q)) / (R.squaredNorm() * (p - q).squaredNorm()));

    const auto [u, v] = s.uv();
    const Jet2 X = sphere_chart(u, v);
    const cplx d = u - v;
    const CMat3 e = -0.5 * d * d * (outer(X.xu, X.xv) + outer(X.xv, X.xu)) - outer(X.x, X.x) + CMat3::Identity();
    xs = std::max(xs, e.norm() / (1.0 + X.x.squaredNorm() + std::norm(d) * X.xu.norm() * X.xv.norm()));
    xn = std::max(xn, std::abs(bsq(X.x) - 1.0) / std::max(1.0, X.x.squaredNorm()));
    xuv = std::max(xuv, (X.xuv + 2.0 / (d * d) * X.x).norm() / std::max(1.0, X.xuv.norm()));
    const Jet2 Z = paraboloid_chart(u, v);
    const CMat3 ez = outer(Z.xu, Z.xv) + outer(Z.xv, Z.xu) - outer(Z.xuv, Z.x) - outer(Z.x, Z.xuv) -
                     (outer(f1(), f1bar()) + outer(f1bar(), f1()));
    zp = std::max(zp, ez.norm() / (1.0 + Z.xu.norm() * Z.xv.norm() + Z.xuv.norm() * Z.x.norm()));
    const ConeRuling y = cone_ruling(s.c() * 2.0);
    cone = std::max(cone, std::abs(bsq(y.y)) / y.y.squaredNorm());
  }
  // Ivory identities on a triaxial family
  CMat3 A = CMat3::Zero();
  A(0, 0) = 0.25;
  A(1, 1) = 0.5;
  A(2, 2) = 1.0;
  const ConfocalFamily fam{Quadric(A)};
  const RulingChart base = RulingChart::of(fam.base(), FrameKind::Symmetric);
  for (int k = 0; k < n; ++k) {
    cplx z;
    do z = cplx(1.5 + 2.0 * s.r(), s.r()); while (fam.near_singular(z, 1e-2));
    const CMat3 iv = sym_sqrt(fam.ivory_operator(z));
    const auto [u1, v1] = s.uv();
    const auto [u2, v2] = s.uv();
    const CVec3 p = base.point(u1, v1), q = base.point(u2, v2);
    const double sc = std::pow(std::max(1.0, std::max(p.norm(), q.norm()) * std::max(1.0, iv.norm())), 2);
    swap = std::max(swap, std::abs(bsq(iv * p - q) - bsq(iv * q - p)) / sc);
    // two points on the u-ruling through p
    const cplx u3 = u1 + s.c();
    if (std::abs(u3 - v1) < 0.5) continue;
    const CVec3 p2 = base.point(u3, v1);
    rl = std::max(rl, std::abs(bsq(iv * (p - p2)) - bsq(p - p2)) / ((p - p2).squaredNorm() * std::max(1.0, iv.squaredNorm())));
  }
  r.upper("bilinear.cross", bc, cfg.tol("bilinear.cross"));
  r.upper("eq:che", che, cfg.tol("eq:che"));
  r.upper("eq:che.diag", ched, cfg.tol("eq:che.diag"));
  r.upper("alpha.cross", ac, cfg.tol("alpha.cross"));
  r.upper("alpha.isometry", ai, cfg.tol("alpha.isometry"));
  r.upper("alpha.equivariance", ae, cfg.tol("alpha.equivariance"));
  r.upper("rigid.isometry", ri, cfg.tol("rigid.isometry"));
  r.upper("eq:XX.sphere", xs, cfg.tol("eq:XX.sphere"));
  r.upper("eq:XX.norm", xn, cfg.tol("eq:XX.norm"));
  r.upper("eq:XX.uv", xuv, cfg.tol("eq:XX.uv"));
  r.upper("eq:XX.paraboloid", zp, cfg.tol("eq:XX.paraboloid"));
  r.upper("cone.isotropic", cone, cfg.tol("cone.isotropic"));
  r.upper("ivory.swap", swap, cfg.tol("ivory.swap"));
  r.upper("ivory.ruling_length", rl, cfg.tol("ivory.ruling_length"));
  r.data["samples"] = n;
  return r;
}

SuiteReport suite_ivory(const ExperimentConfig& cfg) {
  SuiteReport r;
  r.suite = "ivory";
  Sampler s(cfg.seed + 1);
  double sq = 0;
  for (int k = 0; k < 100; ++k) {
    CMat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = s.c();
    const CMat3 sr = sym_sqrt(m);
    sq = std::max(sq, (sr * sr - m).norm() / m.norm());
  }
  r.upper("sym_sqrt", sq, cfg.tol("sym_sqrt"));
  bool rejected = false;
  try {
    sym_sqrt(outer(f1(), f1()));
  } catch (const Error& e) {
    rejected = e.code() == Errc::IsotropicKernel;
  }
  r.within("sym_sqrt.isotropic_kernel_rejected", rejected ? 1.0 : 0.0, 1.0, 1.0);

  const ConfocalFamily fam{Quadric(cfg.quadric)};
  auto random_z = [&] {
    cplx z;
    do z = cplx(3.0 * s.r(), s.r()); while (fam.near_singular(z, 1e-2) || std::abs(z) < 1e-2);
    return z;
  };
  double conf = 0, onm = 0, onq = 0, straight = 0, uv = 0;
  for (int k = 0; k < 100; ++k) {
    const cplx z = random_z(), w = random_z();
    const CMat3 d = fam.member(z).inverse() - fam.member(w).inverse() - (w - z) * CMat3::Identity();
    conf = std::max(conf, d.norm() / std::max(1.0, fam.member(z).inverse().norm()));
    const ConfocalPair pr = confocal_pair(fam, z);
    const auto [u, v] = s.uv();
    const CVec3 p = pr.base.point(u, v);
    const CVec3 ip = fam.ivory_map(z, p);
    onm = std::max(onm, std::abs(pr.aux.quadric().residual(ip)) / std::max(1.0, ip.squaredNorm()));
    for (const RulingChart* c : {&pr.aux, &pr.base}) {
      const Jet2 j = c->eval(u, v);
      onq = std::max(onq, std::abs(c->quadric().residual(j.x)) / std::max(1.0, j.x.squaredNorm()));
      straight = std::max(straight, cross(j.xu, j.xuu).norm() / std::max(1e-300, j.xu.norm() * j.xuu.norm()));
      uv = std::max(uv, (j.xuv + 2.0 / ((u - v) * (u - v)) * j.x).norm() / std::max(1.0, j.xuv.norm()));
    }
  }
  r.upper("confocality", conf, cfg.tol("confocality"));
  r.upper("ivory.on_member", onm, cfg.tol("ivory.on_member"));
  r.upper("chart.on_quadric", onq, cfg.tol("chart.on_quadric"));
  r.upper("chart.straight", straight, cfg.tol("chart.straight"));
  r.upper("chart.uv", uv, cfg.tol("chart.uv"));

  double iso = 0;
  json roots = json::array();
  for (const Quadric& q : {fam.base(), fam.member(random_z())}) {
    const IsotropicRulings ir = isotropic_rulings(q);
    if (ir.all_isotropic) continue;
    int total = ir.at_infinity;
    for (int m : ir.multiplicity) total += m;
    json one = {{"roots", json::array()}, {"multiplicity_sum", total}};
    for (cplx v : ir.roots) {
      const CVec3 y = cone_ruling(v).y;
      iso = std::max(iso, std::abs(bdot(y, q.inverse() * y)) / (y.squaredNorm() * q.inverse().norm()));
      one["roots"].push_back(complex_json(v));
    }
    roots.push_back(one);
  }
  r.upper("isotropic_rulings", iso, cfg.tol("isotropic_rulings"));
  r.data["isotropic_rulings"] = roots;
  r.data["singular_parameters"] = json::array();
  for (cplx l : fam.singular_parameters()) r.data["singular_parameters"].push_back(complex_json(l));
  return r;
}

SuiteReport suite_roll(const ExperimentConfig& cfg) {
  SuiteReport r;
  r.suite = "roll";
  const SurfacePatch x0 = fixture_base(cfg), x = fixture_surface(cfg);
  const Grid g = fixture_grid(cfg);
  r.upper("applicability", applicability_residual(x0, x, g), cfg.tol("applicability"));
  const RollingData d = rolling_compute(x0, x, g);
  const RollingChecks c = rolling_checks(d, 1e-4, unsigned(cfg.seed));
  r.upper("orthogonality", c.orthogonality, cfg.tol("orthogonality"));
  r.upper("eq:comp", c.comp, cfg.tol("eq:comp"));
  r.upper("omega.routes", c.routes, cfg.tol("omega.routes"));
  r.upper("eq:om'", c.reflected, cfg.tol("eq:om'"));
  r.upper("eq:aom", c.aom, cfg.tol("eq:aom"));
  const Flatness f = flatness_residuals(x0, x, g, 1e-4);
  r.upper("eq:om", f.flatness, cfg.tol("eq:om"));
  r.upper("eq:omom", f.omom, cfg.tol("eq:omom"));
  const Flatness f1 = flatness_residuals(x0, x, g, 1e-3), f2 = flatness_residuals(x0, x, g, 5e-4);
  r.within("eq:om.halving", f1.flatness / f2.flatness, 3.5, 4.5);
  r.data["flatness_h"] = {{"1e-3", f1.flatness}, {"5e-4", f2.flatness}, {"1e-4", f.flatness}};
  CsvTable t{"rolled", {}};
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const RollingPoint& p = d.at(i, j);
      t.rows.push_back({p.u, p.v, p.R * p.x0 + p.t});
    }
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace bq
