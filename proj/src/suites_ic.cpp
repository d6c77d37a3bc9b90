#include <cmath>

#include "bq/suites.hpp"

namespace bq {

namespace {

double rel_ratio(double a, double b) { return b > 0 ? a / b : INFINITY; }

}  // namespace

SuiteReport suite_check_ic(const ExperimentConfig& cfg) {
  if (cfg.v1_0.empty()) throw ConfigError("backlund.v1_0 is required for check-ic");
  SuiteReport r;
  r.suite = "check-ic";
  const Quadric q(cfg.quadric);
  const ConfocalFamily fam{q};
  const ConfocalPair pr = confocal_pair(fam, cfg.z);
  const SurfacePatch x0 = fixture_base(cfg);
  const SeedPtr seed = fixture_seed(cfg);  // also checks the quadric against the profile

  const FacetField ff = confocal_facet_field(x0, q, pr.aux, cfg.z, cfg.lattice);
  const IcGeneral ic = ic_general_residual(ff);
  r.upper("eq:inteco", ic.max(), cfg.tol("eq:inteco"));
  const SymTcField sf = confocal_symtc_field(x0, q, pr.aux, cfg.z, cfg.lattice);
  const SymTcResidual s = ic_symtc_residual(sf);
  r.upper("eq:dissymTC.1", s.eq1, cfg.tol("eq:dissymTC.1"));
  r.upper("eq:dissymTC.2", s.eq2, cfg.tol("eq:dissymTC.2"));
  const Theorem1Residual t = theorem1_residual(sf);
  r.upper("eq:dissymTC1.A", t.eqA, cfg.tol("eq:dissymTC1.A"));
  r.upper("eq:dissymTC1.B", t.eqB, cfg.tol("eq:dissymTC1.B"));
  r.upper("eq:Wcoco", t.wcoco, cfg.tol("eq:Wcoco"));

  const ChartFn chart = chart_fn(pr.aux);
  const std::vector<TcSample> smp = tc_samples(x0, q, pr.aux, cfg.ic_samples, cfg.seed);
  r.upper("eq:int", int_residual(chart, smp), cfg.tol("eq:int"));
  const FinaResult fi = fina_residual(chart, smp);
  r.upper("eq:fina", fi.residual, cfg.tol("eq:fina"));
  r.within("fina.doubly_ruled", fi.doubly_ruled ? 1 : 0, 1, 1);

  // the Weingarten relation on a run with the same z
  BacklundSpec spec;
  spec.z = cfg.z;
  spec.v1_0 = cfg.v1_0[0];
  spec.grid = fixture_grid(cfg);
  spec.base_u = spec.grid.u(spec.grid.nu / 2);
  spec.base_v = spec.grid.v(spec.grid.nv / 2);
  spec.column_pass = false;
  const RunPtr run = BacklundRun::integrate(seed, fam, spec);
  CheckOptions co;
  co.stride = std::max(1, spec.grid.nu / 10);
  r.upper("weingarten", leaf_checks(*run, co).weingarten, cfg.tol("weingarten"));

  r.upper("sphere_family", ic_general_residual(sphere_family_field()).max(), cfg.tol("sphere_family"));

  // negative controls
  r.lower("control.perturbed_m", ic_general_residual(perturbed_field(ff, 0.01, cfg.seed)).max(), 1e-3);
  r.lower("control.shifted_mb", ic_symtc_residual(shifted_mb(sf, 0.1)).eq1, 1e-3);
  const ChartFn tor = torus_chart(3, 1);
  r.within("control.torus_doubly_ruled", fina_residual(tor, synthetic_tc_samples(tor, 50, cfg.seed)).doubly_ruled, 0,
           0);
  bool degenerate = false;
  try {
    ic_symtc_residual(planar_symtc_field());
  } catch (const Error& e) {
    degenerate = e.code() == Errc::DegenerateField;
  }
  r.within("control.planar_degenerate", degenerate ? 1 : 0, 1, 1);

  r.data["z"] = complex_json(cfg.z);
  r.data["tc_samples"] = smp.size();
  r.data["ic_components"] = {{"uv", ic.uv}, {"uw", ic.uw}, {"vw", ic.vw}};
  return r;
}

SuiteReport suite_rigidity(const ExperimentConfig& cfg) {
  SuiteReport r;
  r.suite = "rigidity";
  const Quadric q(cfg.quadric);
  const ConfocalFamily fam{q};
  const ConfocalPair pr = confocal_pair(fam, cfg.z);
  const SurfacePatch x0 = fixture_base(cfg);
  fixture_seed(cfg);

  auto measure = [&](double eps, double& in, double& th) {
    const RulingChart ch = perturbed_chart(pr.aux, eps);
    in = int_residual(chart_fn(ch), tc_samples(x0, q, ch, cfg.ic_samples, cfg.seed));
    const Theorem1Residual t = theorem1_residual(confocal_symtc_field(x0, q, ch, cfg.z, cfg.lattice));
    th = std::max({t.eqA, t.eqB, t.wcoco});
  };

  double in0, th0;
  measure(0, in0, th0);
  r.upper("baseline.eq:int", in0, cfg.tol("eq:int"));
  r.upper("baseline.theorem1", th0, cfg.tol("eq:dissymTC1.A"));

  const double eps[3] = {1e-3, 1e-2, 1e-1};
  double in[3], th[3];
  json sweep = json::array();
  for (int k = 0; k < 3; ++k) {
    measure(eps[k], in[k], th[k]);
    sweep.push_back({{"eps", eps[k]}, {"eq:int", in[k]}, {"theorem1", th[k]}});
  }
  r.lower("eq:int@1e-2", in[1], 1e-4);
  r.lower("theorem1@1e-2", th[1], 1e-4);
  // linear growth: each decade multiplies the residual by 10, up to a factor 3
  r.within("eq:int.growth.1", rel_ratio(in[1], in[0]), 10.0 / 3, 30);
  r.within("eq:int.growth.2", rel_ratio(in[2], in[1]), 10.0 / 3, 30);
  r.within("theorem1.growth.1", rel_ratio(th[1], th[0]), 10.0 / 3, 30);
  r.within("theorem1.growth.2", rel_ratio(th[2], th[1]), 10.0 / 3, 30);
  r.data["sweep"] = sweep;
  return r;
}

}  // namespace bq
