// bqlab: runs the verification suites and writes JSON/CSV reports.
//
// exit codes: 0 all checks pass, 1 a check failed or numeric error,
// 2 config or output error, 10+k for `all` when suite k is the first failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "bq/suites.hpp"

namespace fs = std::filesystem;
using bq::json;

namespace {

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw bq::ConfigError("cannot write " + p.string());
  out << s;
  if (!out) throw bq::ConfigError("cannot write " + p.string());
}

// runs one suite and writes its files; returns pass
bool run_one(const std::string& name, const bq::ExperimentConfig& cfg, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const bq::SuiteReport r = bq::run_suite(name, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const json j = bq::report_json(r, cfg.echo, utc_timestamp());
  write_text(out / (name + ".json"), j.dump(2) + "\n");
  for (const bq::CsvTable& t : r.tables) bq::write_csv(t, (out / (name + "_" + t.name + ".csv")).string());

  std::printf("%-10s %s  (%.1f s)\n", name.c_str(), r.pass() ? "PASS" : "FAIL", secs);
  if (!r.error.empty()) std::printf("  error: %s\n", r.error.c_str());
  for (const bq::Check& c : r.checks)
    if (!c.pass()) std::printf("  %s = %.3e outside [%.3e, %.3e]\n", c.tag.c_str(), c.value, c.lo, c.hi);
  return r.pass();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bqlab: Backlund transformations of quadric deformations"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<long long> seed;
  std::optional<double> tol_scale;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--tol-scale", tol_scale, "multiplies upper-bound tolerances");
  app.fallthrough();
  for (const std::string& s : bq::suite_names()) app.add_subcommand(s, "run the " + s + " suite");
  app.add_subcommand("all", "run every suite in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  bq::ExperimentConfig cfg;
  fs::path out;
  try {
    json doc = config_path.empty() ? json::object() : bq::read_config_json(config_path);
    if (!doc.is_object()) throw bq::ConfigError("config must be a JSON object");
    if (seed) doc["seed"] = *seed;
    if (tol_scale) doc["tol_scale"] = *tol_scale;
    if (!out_dir.empty()) doc["output"] = out_dir;
    cfg = bq::parse_config(doc);
    out = cfg.output;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw bq::ConfigError("cannot create output directory " + out.string());
  } catch (const bq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    if (sub != "all") return run_one(sub, cfg, out) ? 0 : 1;
    const auto& names = bq::suite_names();
    int first_fail = -1;
    for (std::size_t k = 0; k < names.size(); ++k)
      if (!run_one(names[k], cfg, out) && first_fail < 0) first_fail = static_cast<int>(k);
    return first_fail < 0 ? 0 : 10 + first_fail;
  } catch (const bq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
