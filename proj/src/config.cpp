#include "bq/config.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <optional>
#include <set>

namespace bq {

std::map<std::string, double> default_tolerances() {
  return {
      // identities
      {"bilinear.cross", 1e-10},
      {"eq:che", 1e-10},
      {"eq:che.diag", 1e-10},
      {"alpha.cross", 1e-10},
      {"alpha.isometry", 1e-10},
      {"alpha.equivariance", 1e-10},
      {"rigid.isometry", 1e-10},
      {"eq:XX.sphere", 1e-10},
      {"eq:XX.norm", 1e-10},
      {"eq:XX.uv", 1e-10},
      {"eq:XX.paraboloid", 1e-10},
      {"cone.isotropic", 1e-10},
      {"ivory.swap", 1e-10},
      {"ivory.ruling_length", 1e-10},
      // ivory
      {"sym_sqrt", 1e-10},
      {"confocality", 1e-10},
      {"ivory.on_member", 1e-9},
      {"chart.on_quadric", 1e-11},
      {"chart.straight", 1e-11},
      {"chart.uv", 1e-10},
      {"isotropic_rulings", 1e-10},
      // roll
      {"applicability", 1e-9},
      {"orthogonality", 1e-10},
      {"eq:comp", 1e-5},
      {"eq:om", 1e-5},
      {"eq:omom", 1e-5},
      {"omega.routes", 1e-6},
      {"eq:om'", 1e-8},
      {"eq:aom", 1e-10},
      // backlund
      {"tc", 1e-9},
      {"path_independence", 1e-6},
      {"eq:linel", 1e-6},
      {"acpia", 1e-6},
      {"weingarten", 1e-5},
      {"join.seed", 1e-8},
      {"join.leaf", 1e-8},
      {"leaf.tangency", 1e-8},
      {"ricatti.quadratic", 1e-10},
      {"v1.constant", 1e-14},
      {"leaf.ruling", 1e-12},
      {"eq:linel.trivial", 1e-9},
      // bpt, cube
      {"bpt.closure", 1e-5},
      {"bpt.cross_ratio", 1e-6},
      {"cube.x7", 1e-4},
      {"cube.cross_ratio", 1e-5},
      // irdf
      {"eq:inteco", 1e-6},
      {"eq:dissymTC.1", 1e-6},
      {"eq:dissymTC.2", 1e-6},
      {"eq:Wcoco", 1e-6},
      {"eq:dissymTC1.A", 1e-6},
      {"eq:dissymTC1.B", 1e-6},
      {"eq:int", 1e-6},
      {"eq:fina", 1e-6},
      {"sphere_family", 1e-8},
  };
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx parse_complex(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(what + ": expected a number or an [re, im] pair");
}

json default_config_json() {
  json q = json::array();
  const double d[3] = {0.25, 0.25, 1.0};
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int k = 0; k < 3; ++k) row.push_back(complex_json(i == k ? d[i] : 0.0));
    q.push_back(row);
  }
  return json{
      {"quadric", q},
      {"fixture", {{"name", "spheroid-bend"}, {"a", 2.0}, {"b", 1.0}, {"bend", 0.8}}},
      {"domain", {{"u", {0.4, 1.2}}, {"v", {0.0, 1.0}}}},
      {"grid", {50, 50}},
      {"seed", 42},
      {"samples", 1000},
      {"tol_scale", 1.0},
      {"output", "out"},
      {"tolerances", json::object()},
      {"backlund", {{"z", complex_json(2.5)}, {"check_stride", 1}}},
      {"bpt",
       {{"z", json::array({complex_json(1.5), complex_json(2.5)})}, {"grid", {20, 20}}, {"refine", true},
        {"cr_samples", 50}}},
      {"cube",
       {{"enabled", true}, {"z", json::array({complex_json(1.5), complex_json(2.5), complex_json(5.0)})},
        {"grid", 15}}},
      {"irdf",
       {{"lattice", {{"u", {0.6, 1.0}}, {"v", {0.3, 0.7}}, {"w", {2.3, 2.7}}, {"n", {5, 5, 5}}}},
        {"samples", 200}}},
  };
}

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

std::pair<double, double> range(const json& j, const char* key, const std::string& where) {
  const auto v = get<std::vector<double>>(j, key, where);
  if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError(where + "." + key + " must be [lo, hi] with lo < hi");
  return {v[0], v[1]};
}

std::vector<cplx> complex_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected a list");
  std::vector<cplx> out;
  for (size_t k = 0; k < j.size(); ++k) out.push_back(parse_complex(j[k], what + "[" + std::to_string(k) + "]"));
  return out;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key " + where + "." + k);
}

int grid_dim(int n, const std::string& what) {
  if (n < 3) throw ConfigError(what + " must be at least 3");
  return n;
}

}  // namespace

double ExperimentConfig::tol(const std::string& tag) const {
  const auto it = tolerances.find(tag);
  if (it == tolerances.end()) throw ConfigError("no tolerance for " + tag);
  return it->second * tol_scale;
}

ExperimentConfig parse_config(const json& user) {
  if (!user.is_object()) throw ConfigError("config must be a JSON object");
  json doc = default_config_json();
  check_keys(user, {"quadric", "fixture", "domain", "grid", "seed", "samples", "tol_scale", "output", "tolerances",
                    "backlund", "bpt", "cube", "irdf"},
             "config");
  doc.merge_patch(user);
  check_keys(doc["fixture"], {"name", "a", "b", "bend"}, "fixture");
  check_keys(doc["domain"], {"u", "v"}, "domain");
  check_keys(doc["backlund"], {"z", "v1_0", "check_stride"}, "backlund");
  check_keys(doc["bpt"], {"z", "v1_0", "grid", "refine", "cr_samples"}, "bpt");
  check_keys(doc["cube"], {"enabled", "z", "v1_0", "grid"}, "cube");
  check_keys(doc["irdf"], {"lattice", "samples"}, "irdf");
  check_keys(doc["irdf"]["lattice"], {"u", "v", "w", "n"}, "irdf.lattice");

  ExperimentConfig c;
  const json& q = doc["quadric"];
  if (!q.is_array() || q.size() != 3) throw ConfigError("quadric must be a 3x3 matrix");
  for (int i = 0; i < 3; ++i) {
    if (!q[i].is_array() || q[i].size() != 3) throw ConfigError("quadric must be a 3x3 matrix");
    for (int k = 0; k < 3; ++k)
      c.quadric(i, k) = parse_complex(q[i][k], "quadric[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  std::optional<ConfocalFamily> fam;
  try {
    fam.emplace(Quadric(c.quadric));
  } catch (const Error& e) {
    throw ConfigError(std::string("quadric: ") + e.what());
  }

  const json& fx = doc["fixture"];
  c.fixture = get<std::string>(fx, "name", "fixture");
  if (c.fixture != "spheroid-bend" && c.fixture != "identity")
    throw ConfigError("fixture.name must be \"spheroid-bend\" or \"identity\"");
  c.profile_a = get<double>(fx, "a", "fixture");
  c.profile_b = get<double>(fx, "b", "fixture");
  c.bend = get<double>(fx, "bend", "fixture");
  if (c.profile_a <= 0 || c.profile_b <= 0 || c.bend == 0) throw ConfigError("fixture parameters must be nonzero");

  const auto [u0, u1] = range(doc["domain"], "u", "domain");
  const auto [v0, v1] = range(doc["domain"], "v", "domain");
  c.domain = Domain{u0, u1, v0, v1};
  const auto g = get<std::vector<int>>(doc, "grid", "config");
  if (g.size() != 2) throw ConfigError("grid must be [nu, nv]");
  c.nu = grid_dim(g[0], "grid[0]");
  c.nv = grid_dim(g[1], "grid[1]");
  const auto seed = get<long long>(doc, "seed", "config");
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  c.seed = std::uint64_t(seed);
  c.samples = get<int>(doc, "samples", "config");
  if (c.samples < 1) throw ConfigError("samples must be positive");
  c.tol_scale = get<double>(doc, "tol_scale", "config");
  if (!(c.tol_scale > 0)) throw ConfigError("tol_scale must be positive");
  c.output = get<std::string>(doc, "output", "config");

  c.tolerances = default_tolerances();
  for (const auto& [k, v] : doc["tolerances"].items()) {
    if (!c.tolerances.count(k)) throw ConfigError("unknown tolerance " + k);
    if (!v.is_number() || !(v.get<double>() > 0)) throw ConfigError("tolerance " + k + " must be positive");
    c.tolerances[k] = v.get<double>();
  }

  auto check_z = [&](cplx z, const std::string& what) {
    if (std::abs(z) < 1e-12) throw ConfigError(what + ": z = 0 gives no transformation");
    if (fam->near_singular(z, 1e-9)) throw ConfigError(what + ": z is a singular parameter of the family");
  };
  auto distinct = [](const std::vector<cplx>& zs, const std::string& what) {
    for (size_t a = 0; a < zs.size(); ++a)
      for (size_t b = a + 1; b < zs.size(); ++b)
        if (std::abs(zs[a] - zs[b]) <= 1e-12 * std::max(1.0, std::abs(zs[a])))
          throw ConfigError(what + ": spectral parameters must be distinct");
  };

  const json& bk = doc["backlund"];
  c.z = parse_complex(bk["z"], "backlund.z");
  check_z(c.z, "backlund.z");
  if (bk.contains("v1_0")) c.v1_0 = {parse_complex(bk["v1_0"], "backlund.v1_0")};
  c.check_stride = get<int>(bk, "check_stride", "backlund");
  if (c.check_stride < 1) throw ConfigError("backlund.check_stride must be positive");

  const json& bp = doc["bpt"];
  c.bpt_z = complex_list(bp["z"], "bpt.z");
  if (c.bpt_z.size() != 2) throw ConfigError("bpt.z must hold two values");
  for (cplx z : c.bpt_z) check_z(z, "bpt.z");
  distinct(c.bpt_z, "bpt.z");
  if (bp.contains("v1_0")) {
    c.bpt_v1_0 = complex_list(bp["v1_0"], "bpt.v1_0");
    if (c.bpt_v1_0.size() != 2) throw ConfigError("bpt.v1_0 must hold two values");
  }
  const auto bg = get<std::vector<int>>(bp, "grid", "bpt");
  if (bg.size() != 2) throw ConfigError("bpt.grid must be [nu, nv]");
  c.bpt_nu = grid_dim(bg[0], "bpt.grid[0]");
  c.bpt_nv = grid_dim(bg[1], "bpt.grid[1]");
  c.bpt_refine = get<bool>(bp, "refine", "bpt");
  c.cr_samples = get<int>(bp, "cr_samples", "bpt");

  const json& cb = doc["cube"];
  c.cube_enabled = get<bool>(cb, "enabled", "cube");
  c.cube_z = complex_list(cb["z"], "cube.z");
  if (c.cube_z.size() != 3) throw ConfigError("cube.z must hold three values");
  for (cplx z : c.cube_z) check_z(z, "cube.z");
  distinct(c.cube_z, "cube.z");
  if (cb.contains("v1_0")) {
    c.cube_v1_0 = complex_list(cb["v1_0"], "cube.v1_0");
    if (c.cube_v1_0.size() != 3) throw ConfigError("cube.v1_0 must hold three values");
  }
  c.cube_n = grid_dim(get<int>(cb, "grid", "cube"), "cube.grid");

  const json& lat = doc["irdf"]["lattice"];
  const auto [lu0, lu1] = range(lat, "u", "irdf.lattice");
  const auto [lv0, lv1] = range(lat, "v", "irdf.lattice");
  const auto [lw0, lw1] = range(lat, "w", "irdf.lattice");
  const auto ln = get<std::vector<int>>(lat, "n", "irdf.lattice");
  if (ln.size() != 3 || *std::min_element(ln.begin(), ln.end()) < 2)
    throw ConfigError("irdf.lattice.n must be three sizes >= 2");
  c.lattice = Lattice{lu0, lu1, lv0, lv1, lw0, lw1, ln[0], ln[1], ln[2]};
  c.ic_samples = get<int>(doc["irdf"], "samples", "irdf");
  if (c.ic_samples < 1) throw ConfigError("irdf.samples must be positive");

  c.echo = doc;
  return c;
}

json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return doc;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_config_json(path)); }

}  // namespace bq
