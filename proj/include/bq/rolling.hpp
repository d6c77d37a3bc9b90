#pragma once

#include <functional>
#include <vector>

#include "bq/surface.hpp"

namespace bq {

struct RollingPoint {
  double u = 0, v = 0;
  CMat3 R = CMat3::Identity();
  CVec3 t = CVec3::Zero();  // valid only when positions were requested
  OneForm3 omega;           // from the difference of second forms
  CMat2 s = CMat2::Zero();  // II(x) - II(x0)
  CVec3 x0 = CVec3::Zero(), n0 = CVec3::Zero(), n = CVec3::Zero();
  OneForm3 dx0, dn0;
  cplx K0{};
  bool flipped = false;  // N was negated to get det R = +1
};

// R = [xu xv N][x0u x0v N0]^-1, t = x - R x0
RollingPoint roll_point(const SurfacePatch& x0, const SurfacePatch& x, double u, double v, bool with_translation = true);

struct RollingData {
  SurfacePatch x0, x;
  Grid grid;
  std::vector<RollingPoint> pts;
  const RollingPoint& at(int i, int j) const { return pts[grid.index(i, j)]; }
};

RollingData rolling_compute(const SurfacePatch& x0, const SurfacePatch& x, const Grid& g, double app_tol = 1e-8);

// omega = R^-1 (N x dN) - N0 x dN0 with dN, dN0 by central differences
OneForm3 omega_route1(const SurfacePatch& x0, const SurfacePatch& x, double u, double v, double h = 1e-4);

struct RollingChecks {
  double applicability = 0;
  double orthogonality = 0;
  double det_dev = 0;
  double dx_match = 0;     // xu - R x0u, xv - R x0v
  double comp = 0;         // R^-1 dR ^ dx0
  double om_normal = 0;    // omega^T N0
  double om_cross_dx0 = 0; // omega x^ dx0
  double routes = 0;       // route 1 vs route 2
  double s_symmetry = 0;
  double reflected = 0;    // omega' = -omega - 2 N0 x dN0
  double aom = 0;          // a^T ^ omega for a^T . dx0 = 0
};

RollingChecks rolling_checks(const RollingData& d, double h = 1e-4, unsigned seed = 42);

struct Flatness {
  double flatness = 0;
  double omom = 0;
};

// optional additive perturbation of omega, for negative controls
using OmegaPerturbation = std::function<OneForm3(double u, double v, const RollingPoint&)>;

Flatness flatness_residuals(const SurfacePatch& x0, const SurfacePatch& x, const Grid& g, double h = 1e-4,
                            const OmegaPerturbation& perturb = nullptr);

}  // namespace bq
