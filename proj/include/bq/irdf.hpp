#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bq/backlund.hpp"

namespace bq {

// box lattice in (u, v, w), endpoints included
struct Lattice {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1, w0 = 0, w1 = 1;
  int nu = 5, nv = 5, nw = 5;
  double u(int i) const { return nu == 1 ? u0 : u0 + i * (u1 - u0) / (nu - 1); }
  double v(int j) const { return nv == 1 ? v0 : v0 + j * (v1 - v0) / (nv - 1); }
  double w(int k) const { return nw == 1 ? w0 : w0 + k * (w1 - w0) / (nw - 1); }
};

// facet centre p and plane normal m
struct FacetSample {
  CVec3 p = CVec3::Zero(), m = CVec3::Zero();
};
struct FacetField {
  std::string name;
  std::function<FacetSample(double, double, double)> fn;
  Lattice lat;
};

// tangential facets over x0: p = x0 + V with V^T N0 = 0 and m = V x N0 + mb N0
struct SymTcSample {
  CVec3 x0 = CVec3::Zero(), n0 = CVec3::Zero(), V = CVec3::Zero();
  cplx mb{};
  cplx K{};
};
struct SymTcField {
  std::string name;
  std::function<SymTcSample(double, double, double)> fn;
  Lattice lat;
};

struct IcGeneral {
  double uv = 0, uw = 0, vw = 0;
  double max() const { return std::max({uv, uw, vw}); }
};
// (dp x dw p)^T ^ (m x dm) + 1/2 (dw m x m)^T (dp x^ dp), per 2-form component, m rescaled to unit length
IcGeneral ic_general_residual(const FacetField& f, double h = 1e-3);

struct SymTcResidual {
  double eq1 = 0, eq2 = 0;
};
SymTcResidual ic_symtc_residual(const SymTcField& f, double h = 1e-3);

struct Theorem1Residual {
  double eqA = 0, eqB = 0, wcoco = 0;
};
Theorem1Residual theorem1_residual(const SymTcField& f, double h = 1e-3);

// fixtures
FacetField sphere_family_field();
// x0 on base quadric q, V from the TC with the auxiliary chart, w = v1
FacetField confocal_facet_field(const SurfacePatch& x0, const Quadric& q, const RulingChart& aux, cplx z,
                                const Lattice& lat);
SymTcField confocal_symtc_field(const SurfacePatch& x0, const Quadric& q, const RulingChart& aux, cplx z,
                                const Lattice& lat);
// m + eps * (smooth random field)
FacetField perturbed_field(const FacetField& f, double eps, std::uint64_t seed);
SymTcField shifted_mb(const SymTcField& f, cplx delta);
// plane base, K = 0 everywhere
SymTcField planar_symtc_field();

using ChartFn = std::function<Jet2(cplx, cplx)>;
ChartFn chart_fn(const RulingChart& c);
// u-curves are circles
ChartFn torus_chart(double big_r, double small_r);

struct TcSample {
  CVec3 x0 = CVec3::Zero(), n0 = CVec3::Zero();
  cplx u1{}, v1{};
};
// random TC samples: x0 on the patch, v1 uniform in [vlo, vhi], u1 from the TC.
// Samples near the chart pole (|u1 - v1| < 0.2) are skipped.
std::vector<TcSample> tc_samples(const SurfacePatch& x0, const Quadric& q, const RulingChart& aux, int n,
                                 std::uint64_t seed, double vlo = -2, double vhi = 2);
// samples for a chart without a TC solver: x0 is offset from the chart point inside a random plane
std::vector<TcSample> synthetic_tc_samples(const ChartFn& chart, int n, std::uint64_t seed);

// (I - N0 N0^T)(a b^T + b a^T) N0 - (x_uv^T N0) V, relative to max(1, |a||b|)
double int_residual(const ChartFn& chart, const std::vector<TcSample>& s);

struct FinaResult {
  double residual = 0;
  double straight_u = 0, straight_v = 0;  // |x_uu x x_u|, |x_vv x x_v|
  bool doubly_ruled = false;
};
FinaResult fina_residual(const ChartFn& chart, const std::vector<TcSample>& s);

// A + eps (e1 e2^T + e2 e1^T)
Quadric perturbed_quadric(const Quadric& q, double eps);
// chart of the perturbed quadric with frame S_eps S_0^-1 M (S_eps^2 = A_eps^-1), continuous in eps
RulingChart perturbed_chart(const RulingChart& c, double eps);

}  // namespace bq
