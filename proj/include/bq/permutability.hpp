#pragma once

#include <array>
#include <string>
#include <vector>

#include "bq/backlund.hpp"

namespace bq {

// ((t1-t3)(t2-t4))/((t1-t4)(t2-t3)) with t the affine parameter on the line p1 p2
cplx cross_ratio(const CVec3& p1, const CVec3& p2, const CVec3& p3, const CVec3& p4, double tol = 1e-8);

struct Plane {
  CVec3 normal;
  cplx offset;  // normal^T p = offset
};

struct IncidenceConfig {
  std::vector<CVec3> points;
  std::vector<Plane> planes;
  int n = 1;
};

struct IncidenceReport {
  bool ok = false;
  std::vector<int> point_counts;
  std::vector<int> plane_counts;
};

IncidenceReport mobius_incidence_check(const IncidenceConfig& c, double tol = 1e-8);

struct SitcCandidate {
  cplx v{};   // initial ruling parameter for B_{z2} applied to x1
  cplx u{};   // its TC partner
  CVec3 x3 = CVec3::Zero();
  double second_tangency = 0;  // x3 - x2 against the normal of x2
  double consistency = 0;      // x3 pulled back by x2's rolling, residual on x_{z1}
  bool realizes = false;
  cplx v_route_b{};            // initial ruling parameter for B_{z1} applied to x2
  double facet_mismatch = 0;   // facet normals of the two routes at x3
  cplx cross_ratio{};
};

struct SitcResult {
  std::array<SitcCandidate, 2> cand;
  cplx target{};  // z1/z2
  std::string convention;
};

// run1 = B_{z1}(x0), run2 = B_{z2}(x0) with a common base node. Candidates are
// the two roots of the quadratic "x3 lies in the tangent plane of x2".
SitcResult sitc_init(const RunPtr& run1, const RunPtr& run2, const SeedPtr& leaf1, const SeedPtr& leaf2);

// cross-ratio of x1, x2 and the meets of the segment x1 x2 with the two rulings at one node
cplx quadrilateral_cross_ratio(const BacklundRun& r1, const BacklundRun& r2, const BacklundRun& ra, int i, int j);

struct BptOptions {
  cplx z1{}, z2{};
  cplx v1_0_1{}, v1_0_2{};
  Grid grid;
  double base_u = 0, base_v = 0;
  int choice = 0;
  int cr_samples = 50;
  bool refine = true;  // repeat on the doubled grid
  double threshold = 1e-5;
};

struct BptReport {
  SitcResult sitc;
  int choice = 0;
  bool integrated = false;
  std::string failure;
  double closure = 0;
  double cr_dev = 0;
  int cr_count = 0;
  double refined_closure = 0;
  double refinement_factor = 0;
  bool closed = false;
  bool mobius_ok = false;
  bool same_family = false;
  RunPtr r1, r2, ra, rb;
};

BptReport bpt_close(const SeedPtr& seed, const ConfocalFamily& fam, const BptOptions& opt);

struct CubeOptions {
  std::array<cplx, 3> z{};
  std::array<cplx, 3> v1_0{};
  Grid grid;
  double base_u = 0, base_v = 0;
};

struct CubeReport {
  double x7_discrepancy = 0;
  std::array<double, 3> pair_discrepancy{};
  std::array<cplx, 3> face_cr{};
  std::array<cplx, 3> face_target{};
  double face_cr_dev = 0;
  std::array<double, 3> face_closure{};
};

CubeReport titc_cube(const SeedPtr& seed, const ConfocalFamily& fam, const CubeOptions& opt);

}  // namespace bq
