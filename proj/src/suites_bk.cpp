#include <cmath>

#include "bq/suites.hpp"

namespace bq {

namespace {

json cand_json(const SitcCandidate& c) {
  return {{"v", complex_json(c.v)},
          {"u", complex_json(c.u)},
          {"second_tangency", c.second_tangency},
          {"consistency", c.consistency},
          {"realizes", c.realizes},
          {"v_route_b", complex_json(c.v_route_b)},
          {"facet_mismatch", c.facet_mismatch},
          {"cross_ratio", complex_json(c.cross_ratio)}};
}

CsvTable leaf_table(const std::string& name, const BacklundRun& run) {
  CsvTable t{name, {}};
  const Grid& g = run.grid();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) t.rows.push_back({g.u(i), g.v(j), run.node(i, j).x1});
  return t;
}

}  // namespace

SuiteReport suite_backlund(const ExperimentConfig& cfg) {
  if (cfg.v1_0.empty()) throw ConfigError("backlund.v1_0 is required");
  SuiteReport r;
  r.suite = "backlund";
  const SeedPtr seed = fixture_seed(cfg);
  const ConfocalFamily fam{Quadric(cfg.quadric)};
  const Grid g = fixture_grid(cfg);
  BacklundSpec spec;
  spec.z = cfg.z;
  spec.v1_0 = cfg.v1_0[0];
  spec.grid = g;
  spec.base_u = g.u(g.nu / 2);
  spec.base_v = g.v(g.nv / 2);
  const RunPtr run = BacklundRun::integrate(seed, fam, spec);

  r.upper("tc", run->tc_residual(), cfg.tol("tc"));
  r.upper("path_independence", run->path_independence(), cfg.tol("path_independence"));
  double rq = 0;
  for (int i = 0; i < g.nu; i += std::max(1, g.nu / 4))
    for (int j = 0; j < g.nv; j += std::max(1, g.nv / 4)) rq = std::max(rq, ricatti_quadratic_residual(*run, i, j));
  r.upper("ricatti.quadratic", rq, cfg.tol("ricatti.quadratic"));

  double spread = 0;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) spread = std::max(spread, std::abs(run->v1(i, j) - spec.v1_0));

  if (cfg.fixture == "identity") {
    r.upper("v1.constant", spread, cfg.tol("v1.constant"));
    // every leaf point on the ruling v1 = v1_0 through the base node's leaf point
    const LeafPoint& b = run->node(run->base_i(), run->base_j());
    const CVec3 dir = run->pair().aux.eval(b.tc.u1, spec.v1_0).xu;
    double off = 0;
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j < g.nv; ++j) {
        const CVec3& x1 = run->node(i, j).x1;
        off = std::max(off, cross(x1 - b.x1, dir).norm() / (dir.norm() * std::max(1.0, x1.norm())));
      }
    r.upper("leaf.ruling", off, cfg.tol("leaf.ruling"));
    CheckOptions o;
    o.weingarten = false;
    o.stride = cfg.check_stride;
    r.upper("eq:linel.trivial", leaf_checks(*run, o).linel, cfg.tol("eq:linel.trivial"));
  } else {
    CheckOptions o;
    o.stride = cfg.check_stride;
    const LeafChecks c = leaf_checks(*run, o);
    r.upper("eq:linel", c.linel, cfg.tol("eq:linel"));
    r.upper("acpia", c.acpia, cfg.tol("acpia"));
    r.upper("weingarten", c.weingarten, cfg.tol("weingarten"));
    r.upper("join.seed", c.join_seed, cfg.tol("join.seed"));
    r.upper("join.leaf", c.join_leaf, cfg.tol("join.leaf"));
    r.upper("leaf.tangency", c.leaf_tangency, cfg.tol("leaf.tangency"));
  }
  r.data["z"] = complex_json(cfg.z);
  r.data["v1_0"] = complex_json(spec.v1_0);
  r.data["v1_spread"] = spread;
  r.data["base_node"] = {run->base_i(), run->base_j()};
  r.tables.push_back(leaf_table("leaf", *run));
  return r;
}

SuiteReport suite_bpt(const ExperimentConfig& cfg) {
  if (cfg.bpt_v1_0.size() != 2) throw ConfigError("bpt.v1_0 is required");
  SuiteReport r;
  r.suite = "bpt";
  const SeedPtr seed = fixture_seed(cfg);
  const ConfocalFamily fam{Quadric(cfg.quadric)};
  BptOptions o;
  o.z1 = cfg.bpt_z[0];
  o.z2 = cfg.bpt_z[1];
  o.v1_0_1 = cfg.bpt_v1_0[0];
  o.v1_0_2 = cfg.bpt_v1_0[1];
  o.grid = Grid(cfg.domain, cfg.bpt_nu, cfg.bpt_nv);
  o.base_u = cfg.domain.u0;
  o.base_v = cfg.domain.v0;
  o.cr_samples = cfg.cr_samples;
  o.refine = cfg.bpt_refine;
  o.threshold = cfg.tol("bpt.closure");
  json cands = json::array();
  for (int k = 0; k < 2; ++k) {
    o.choice = k;
    const BptReport b = bpt_close(seed, fam, o);
    const std::string sfx = "." + std::to_string(k + 1);
    r.upper("bpt.closure" + sfx, b.closure, cfg.tol("bpt.closure"));
    r.upper("bpt.cross_ratio" + sfx, b.integrated ? b.cr_dev : INFINITY, cfg.tol("bpt.cross_ratio"));
    if (o.refine) r.lower("bpt.refinement" + sfx, b.refinement_factor, 1.8);
    r.within("bpt.mobius" + sfx, b.mobius_ok ? 1.0 : 0.0, 1.0, 1.0);
    json cj = cand_json(b.sitc.cand[k]);
    cj["integrated"] = b.integrated;
    if (!b.failure.empty()) cj["failure"] = b.failure;
    cj["same_family"] = b.same_family;
    cj["cross_ratio_samples"] = b.cr_count;
    cj["refined_closure"] = b.refined_closure;
    cands.push_back(cj);
    if (k == 0) {
      r.data["target"] = complex_json(b.sitc.target);
      r.data["convention"] = b.sitc.convention;
    }
    if (b.integrated && b.closure <= o.threshold) r.tables.push_back(leaf_table("x3_candidate" + sfx.substr(1), *b.ra));
  }
  r.data["candidates"] = cands;
  return r;
}

SuiteReport suite_cube(const ExperimentConfig& cfg) {
  SuiteReport r;
  r.suite = "cube";
  r.data["enabled"] = cfg.cube_enabled;
  if (!cfg.cube_enabled) return r;
  if (cfg.cube_v1_0.size() != 3) throw ConfigError("cube.v1_0 is required");
  const SeedPtr seed = fixture_seed(cfg);
  const ConfocalFamily fam{Quadric(cfg.quadric)};
  CubeOptions o;
  for (int k = 0; k < 3; ++k) {
    o.z[k] = cfg.cube_z[k];
    o.v1_0[k] = cfg.cube_v1_0[k];
  }
  o.grid = Grid(cfg.domain, cfg.cube_n, cfg.cube_n);
  o.base_u = cfg.domain.u0;
  o.base_v = cfg.domain.v0;
  const CubeReport c = titc_cube(seed, fam, o);
  r.upper("cube.x7", c.x7_discrepancy, cfg.tol("cube.x7"));
  r.upper("cube.cross_ratio", c.face_cr_dev, cfg.tol("cube.cross_ratio"));
  json faces = json::array();
  for (int k = 0; k < 3; ++k)
    faces.push_back({{"cross_ratio", complex_json(c.face_cr[k])},
                     {"target", complex_json(c.face_target[k])},
                     {"closure", c.face_closure[k]}});
  r.data["faces"] = faces;
  r.data["x7_pairs"] = {c.pair_discrepancy[0], c.pair_discrepancy[1], c.pair_discrepancy[2]};
  return r;
}

}  // namespace bq
