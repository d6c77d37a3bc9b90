#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bq/quadric.hpp"
#include "bq/rolling.hpp"
#include "bq/surface.hpp"

namespace bq {

// What the engine needs from a seed at one parameter point: the point x0 on
// the quadric with its normal and differentials, and the rolling (R, t, omega)
// that carries it onto the seed surface.
struct SeedSample {
  CVec3 x0 = CVec3::Zero(), n0 = CVec3::Zero();
  OneForm3 dx0, dn0;
  CMat3 R = CMat3::Identity();
  CVec3 t = CVec3::Zero();
  bool has_t = false;
  OneForm3 omega;
  cplx K{};  // Gauss curvature, same for x0 and the seed
};

class SeedField {
 public:
  virtual ~SeedField() = default;
  virtual SeedSample sample(double u, double v, bool with_translation) const = 0;
  virtual const Quadric& quadric() const = 0;
  virtual Domain domain() const = 0;
  virtual std::string name() const = 0;
};
using SeedPtr = std::shared_ptr<const SeedField>;

class BacklundRun;
using RunPtr = std::shared_ptr<const BacklundRun>;

// x0 is a patch on q, x a surface applicable to it
SeedPtr rolled_seed(const SurfacePatch& x0, const SurfacePatch& x, const Quadric& q);
// same seed rolled with the other face: R' = R (I - 2 N0 N0^T)
SeedPtr reflected_seed(SeedPtr inner);
// the leaf of a run, rolled on the base quadric through the Ivory preimage
SeedPtr leaf_seed(RunPtr run, double fd_step = 1e-3);

struct TangencySolution {
  cplx u1{}, v1{};
  CVec3 V = CVec3::Zero();  // x_z(u1,v1) - x0
  Jet2 chart;               // jet of x_z at (u1,v1)
};

// N0^T (x_z(u1,v1) - x0) = 0 solved for u1 in closed form
TangencySolution tangency_solve(const RulingChart& chart, const CVec3& x0, const CVec3& n0, cplx v1);

struct MFields {
  CVec3 m = CVec3::Zero(), mp = CVec3::Zero();
  cplx B{};
};
// m = B a x V, m' = B b x V with a, b the chart partials and B = -z/((a.N0)(b.N0))
MFields m_fields(const TangencySolution& s, const CVec3& n0, cplx z);

enum class Family { B, BPrime };

struct BacklundSpec {
  cplx z{};
  cplx v1_0{};
  Grid grid;
  double base_u = 0, base_v = 0;
  Family family = Family::B;
  double blowup_bound = 1e6;
  bool column_pass = true;  // second path for the path independence check
};

// Everything at one leaf point
struct LeafPoint {
  SeedSample seed;
  TangencySolution tc;
  MFields mf;
  OneForm1 du1, dv1;        // chain rule through the TC solve and the Ricatti system
  CVec3 x1 = CVec3::Zero();  // leaf point R x_z + t
  CVec3 n1 = CVec3::Zero();  // unit leaf normal along R m
  CVec3 xs = CVec3::Zero();  // seed point R x0 + t
  CVec3 ns = CVec3::Zero();  // seed normal R N0
};

class BacklundRun {
 public:
  static RunPtr integrate(SeedPtr seed, const ConfocalFamily& fam, const BacklundSpec& spec,
                          FrameKind frame = FrameKind::RealRulings);
  static RunPtr integrate(SeedPtr seed, const ConfocalPair& pair, const BacklundSpec& spec);

  const SeedField& seed() const { return *seed_; }
  SeedPtr seed_ptr() const { return seed_; }
  const ConfocalPair& pair() const { return pair_; }
  const BacklundSpec& spec() const { return spec_; }
  cplx z() const { return pair_.z; }
  const Grid& grid() const { return spec_.grid; }
  int base_i() const { return bi_; }
  int base_j() const { return bj_; }

  cplx v1(int i, int j) const { return v1_[grid().index(i, j)]; }
  const LeafPoint& node(int i, int j) const { return nodes_[grid().index(i, j)]; }
  double path_independence() const { return path_indep_; }
  double tc_residual() const { return tc_res_; }

  // dv1 = F_u du + F_v dv at (u, v) for the value v1
  OneForm1 rhs(const SeedSample& s, cplx v1) const;
  OneForm1 rhs(double u, double v, cplx v1) const;
  // one RK4 step along the straight segment (u,v) -> (u+du, v+dv)
  cplx step(double u, double v, cplx v1, double du, double dv) const;
  // v1 anywhere in the grid, one RK4 step from the nearest node
  cplx v1_at(double u, double v) const;
  LeafPoint leaf_at(double u, double v, cplx v1, bool with_translation = true) const;
  LeafPoint leaf_at(double u, double v) const { return leaf_at(u, v, v1_at(u, v)); }

 private:
  BacklundRun(SeedPtr seed, const ConfocalPair& pair, const BacklundSpec& spec);
  void run();
  cplx march(double u, double v, cplx y, double du, double dv, int steps) const;

  SeedPtr seed_;
  ConfocalPair pair_;
  BacklundSpec spec_;
  int bi_ = 0, bj_ = 0;
  std::vector<cplx> v1_;
  std::vector<LeafPoint> nodes_;
  double path_indep_ = 0;
  double tc_res_ = 0;
};

// Leaf jet at a node by Richardson-extrapolated differences of leaf points,
// each obtained by a local RK4 step from the node.
struct LeafJetOptions {
  double h = 1e-3;
  double normal_offset = 0;  // evaluate x1 + offset * N1 instead of x1 (negative control)
};
Jet2 leaf_jet(const BacklundRun& run, int i, int j, const LeafJetOptions& opt = {});

struct LeafChecks {
  double linel = 0;
  double acpia = 0;
  double weingarten = 0;
  double join_seed = 0;     // (x1 - x0)^T N0
  double join_leaf = 0;     // (x1 - x0)^T N1, N1 from leaf differences
  double leaf_tangency = 0; // (R m)^T dx1
};

struct CheckOptions {
  int stride = 1;                       // check every stride-th node in each direction
  std::optional<cplx> linel_z;          // predicted form from another member (negative control)
  bool acpia_identity = false;          // identity instead of Ivory (negative control)
  double normal_offset = 0;             // perturbed leaf for the Weingarten control
  bool weingarten = true;
  double h = 1e-3;
};
LeafChecks leaf_checks(const BacklundRun& run, const CheckOptions& opt = {});

// 3-point quadratic fit of the RHS in v1 vs a 4th sample (relative)
double ricatti_quadratic_residual(const BacklundRun& run, int i, int j);

// Rolling of x0 onto the leaf's Ivory preimage: R01 maps
// [V01, d_u1 x_z^1, d_u0 x_0^0] to [-V10, d_u1 x_0^1, d_u0 x_z^0].
struct Rmpia {
  CMat3 R01 = CMat3::Identity();
  cplx u0{}, v0{};
  CVec3 x01 = CVec3::Zero();  // base.point(u1, v1)
  double orthogonality = 0;
  double reflection = 0;  // R01 (I - 2 N0 N0^T) d_v1 x_z^1 vs d_v1 x_0^1
};
Rmpia rmpia(const ConfocalPair& pair, const CVec3& x0, const CVec3& n0, const TangencySolution& tc);

}  // namespace bq
