#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bq/irdf.hpp"
#include "json.hpp"

namespace bq {

using json = nlohmann::json;

// bad or inconsistent configuration; the CLI maps it to exit code 2
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  CMat3 quadric = CMat3::Zero();
  std::string fixture = "spheroid-bend";  // or "identity" (seed = the quadric itself)
  double profile_a = 2, profile_b = 1, bend = 0.8;
  Domain domain{0.4, 1.2, 0.0, 1.0};
  int nu = 50, nv = 50;
  std::uint64_t seed = 42;
  int samples = 1000;
  double tol_scale = 1;
  std::string output = "out";
  std::map<std::string, double> tolerances;

  // backlund
  cplx z{2.5, 0};
  std::vector<cplx> v1_0;
  int check_stride = 1;
  // bpt
  std::vector<cplx> bpt_z, bpt_v1_0;
  int bpt_nu = 20, bpt_nv = 20;
  bool bpt_refine = true;
  int cr_samples = 50;
  // cube
  bool cube_enabled = true;
  std::vector<cplx> cube_z, cube_v1_0;
  int cube_n = 15;
  // irdf
  Lattice lattice{0.6, 1.0, 0.3, 0.7, 2.3, 2.7, 5, 5, 5};
  int ic_samples = 200;

  json echo;  // the parsed document with defaults filled in

  // configured tolerance times tol_scale
  double tol(const std::string& tag) const;
};

std::map<std::string, double> default_tolerances();
json default_config_json();
// throws ConfigError
ExperimentConfig parse_config(const json& doc);
json read_config_json(const std::string& path);
ExperimentConfig load_config(const std::string& path);

cplx parse_complex(const json& j, const std::string& what);
json complex_json(cplx z);

}  // namespace bq
