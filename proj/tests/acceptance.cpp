// Acceptance run: one PASS/FAIL line per criterion at the pinned tolerances.
//
// The exit status is nonzero only when a criterion fails that is not listed in
// kKnownFailures. Known failures still print FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "bq/suites.hpp"

namespace fs = std::filesystem;
using bq::json;

namespace {

// the second BPT candidate does not realize a closure (see README)
const std::set<int> kKnownFailures{5};

const std::string kConfigDir = BQ_CONFIG_DIR;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bq::SuiteReport timed(const std::string& suite, const bq::ExperimentConfig& cfg, double& secs) {
  const auto t0 = Clock::now();
  bq::SuiteReport r = bq::run_suite(suite, cfg);
  secs = since(t0);
  return r;
}

double value(const bq::SuiteReport& r, const std::string& tag) {
  const bq::Check* c = r.find(tag);
  return c ? c->value : std::numeric_limits<double>::quiet_NaN();
}

void at_most(Outcome& o, const bq::SuiteReport& r, const std::string& tag, double hi) {
  const double v = value(r, tag);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s = %.3e (limit <= %.1e)", tag.c_str(), v, hi);
  o.need(v <= hi, buf);
}
void at_least(Outcome& o, const bq::SuiteReport& r, const std::string& tag, double lo) {
  const double v = value(r, tag);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s = %.3e (limit >= %.1e)", tag.c_str(), v, lo);
  o.need(v >= lo, buf);
}
void between(Outcome& o, const bq::SuiteReport& r, const std::string& tag, double lo, double hi) {
  const double v = value(r, tag);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s = %.3f (range [%.3f, %.3f])", tag.c_str(), v, lo, hi);
  o.need(v >= lo && v <= hi, buf);
}
void runtime(Outcome& o, double secs, double limit) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "runtime %.1f s (limit %.0f s)", secs, limit);
  o.need(secs < limit, buf);
}
void no_error(Outcome& o, const bq::SuiteReport& r) {
  if (!r.error.empty()) o.need(false, "error: " + r.error);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BQ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json strip(json j) {
  j.erase("timestamp");
  return j;
}

Outcome c1(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("identities", cfg, t);
  no_error(o, r);
  o.need(cfg.samples >= 1000, "fewer than 1000 samples");
  for (const std::string tag : {"eq:che", "eq:che.diag", "alpha.cross", "alpha.isometry", "alpha.equivariance",
                                "eq:XX.norm", "eq:XX.uv", "eq:XX.paraboloid", "ivory.swap", "ivory.ruling_length"})
    at_most(o, r, tag, 1e-10);
  runtime(o, t, 5);
  return o;
}

Outcome c2(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("roll", cfg, t);
  no_error(o, r);
  o.need(cfg.nu == 50 && cfg.nv == 50, "grid is not 50x50");
  at_most(o, r, "applicability", 1e-9);
  at_most(o, r, "eq:comp", 1e-5);
  at_most(o, r, "eq:om", 1e-5);
  at_most(o, r, "eq:omom", 1e-5);
  at_most(o, r, "omega.routes", 1e-6);
  between(o, r, "eq:om.halving", 3.5, 4.5);
  runtime(o, t, 10);
  return o;
}

Outcome c3(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("backlund", cfg, t);
  no_error(o, r);
  at_most(o, r, "v1.constant", 1e-14);
  at_most(o, r, "leaf.ruling", 1e-12);
  at_most(o, r, "eq:linel.trivial", 1e-9);
  return o;
}

Outcome c4(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("backlund", cfg, t);
  no_error(o, r);
  at_most(o, r, "tc", 1e-9);
  at_most(o, r, "path_independence", 1e-6);
  at_most(o, r, "eq:linel", 1e-6);
  at_most(o, r, "acpia", 1e-6);
  at_most(o, r, "weingarten", 1e-5);
  at_most(o, r, "join.seed", 1e-8);
  at_most(o, r, "join.leaf", 1e-8);
  runtime(o, t, 30);
  return o;
}

Outcome c5(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("bpt", cfg, t);
  no_error(o, r);
  o.need(cfg.bpt_nu == 20 && cfg.bpt_nv == 20 && cfg.bpt_refine, "grid is not 20x20 with refinement");
  for (const std::string k : {".1", ".2"}) {
    at_most(o, r, "bpt.closure" + k, 1e-5);
    at_most(o, r, "bpt.cross_ratio" + k, 1e-6);
    at_least(o, r, "bpt.refinement" + k, 1.8);
  }
  return o;
}

Outcome c6(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("cube", cfg, t);
  no_error(o, r);
  o.need(cfg.cube_enabled, "cube disabled");
  at_most(o, r, "cube.x7", 1e-4);
  at_most(o, r, "cube.cross_ratio", 1e-5);
  return o;
}

Outcome c7(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("rigidity", cfg, t);
  no_error(o, r);
  at_least(o, r, "eq:int@1e-2", 1e-4);
  at_least(o, r, "theorem1@1e-2", 1e-4);
  for (const std::string tag : {"eq:int.growth.1", "eq:int.growth.2", "theorem1.growth.1", "theorem1.growth.2"})
    between(o, r, tag, 10.0 / 3, 30);
  return o;
}

Outcome c8(const bq::ExperimentConfig& cfg) {
  Outcome o;
  double t;
  const bq::SuiteReport r = timed("check-ic", cfg, t);
  no_error(o, r);
  for (const std::string tag : {"eq:inteco", "eq:dissymTC.1", "eq:dissymTC.2", "eq:Wcoco", "eq:dissymTC1.A",
                                "eq:dissymTC1.B", "eq:int", "eq:fina"})
    at_most(o, r, tag, 1e-6);
  at_most(o, r, "weingarten", 1e-5);
  return o;
}

Outcome c9() {
  Outcome o;
  const fs::path out = fs::temp_directory_path() / ("bqlab_acceptance_" + std::to_string(::getpid()));
  const std::string args = "all --config " + kConfigDir + "/default.json --out " + out.string();

  const auto t0 = Clock::now();
  const int rc1 = run_cli(args);
  const double secs = since(t0);
  runtime(o, secs, 60);
  const auto& names = bq::suite_names();
  std::vector<json> first;
  int expect = 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::ifstream in(out / (names[k] + ".json"));
    if (!in) {
      o.need(false, "missing report " + names[k]);
      return o;
    }
    first.push_back(strip(json::parse(in)));
    if (expect == 0 && !first.back()["pass"].get<bool>()) expect = 10 + static_cast<int>(k);
  }
  o.need(rc1 == expect, "all exited " + std::to_string(rc1) + ", reports imply " + std::to_string(expect));

  const int rc2 = run_cli(args);
  o.need(rc2 == rc1, "second run exit code differs");
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::ifstream in(out / (names[k] + ".json"));
    o.need(strip(json::parse(in)).dump() == first[k].dump(), names[k] + " report differs between runs");
  }

  // single-suite and config contract
  o.need(run_cli("identities --config " + kConfigDir + "/default.json --out " + out.string()) == 0,
         "identities did not exit 0");
  o.need(run_cli("ivory --tol-scale 1e-30 --config " + kConfigDir + "/default.json --out " + out.string()) == 1,
         "failing check did not exit 1");
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << R"({"grid": [2, 2]})";
  o.need(run_cli("roll --config " + bad.string() + " --out " + out.string()) == 2, "config error did not exit 2");
  std::error_code ec;
  fs::remove_all(out, ec);
  return o;
}

}  // namespace

int main() {
  bq::ExperimentConfig def, ident;
  try {
    def = bq::load_config(kConfigDir + "/default.json");
    json j = bq::read_config_json(kConfigDir + "/identity.json");
    ident = bq::parse_config(j);
  } catch (const bq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity suite", [&] { return c1(def); }},
      {"rolling suite", [&] { return c2(def); }},
      {"trivial Backlund", [&] { return c3(ident); }},
      {"full Backlund", [&] { return c4(def); }},
      {"BPT closure, both candidates", [&] { return c5(def); }},
      {"TITC cube", [&] { return c6(def); }},
      {"rigidity controls", [&] { return c7(def); }},
      {"IRDF consistency", [&] { return c8(def); }},
      {"CLI determinism and exit codes", [&] { return c9(); }},
  };

  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    const bool known = kKnownFailures.count(id) > 0;
    std::printf("criterion %d %-32s %s%s  (%.1f s)\n", id, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                !o.pass && known ? " (known)" : "", since(t0));
    for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
    if (!o.pass && !known) ++unexpected;
  }
  std::fflush(stdout);
  return unexpected == 0 ? 0 : 1;
}
