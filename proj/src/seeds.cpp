#include <cmath>

#include "bq/backlund.hpp"

namespace bq {

namespace {

class RolledSeed final : public SeedField {
 public:
  RolledSeed(SurfacePatch x0, SurfacePatch x, Quadric q) : x0_(std::move(x0)), x_(std::move(x)), q_(std::move(q)) {
    const Domain& d = x0_.domain();
    for (double a : {0.0, 0.5, 1.0})
      for (double b : {0.0, 0.5, 1.0}) {
        const CVec3 p = x0_.point(d.u0 + a * (d.u1 - d.u0), d.v0 + b * (d.v1 - d.v0));
        if (std::abs(q_.residual(p)) > 1e-9 * std::max(1.0, p.squaredNorm()))
          throw Error(Errc::InvalidArgument, "seed base patch is not on the quadric");
      }
  }
  SeedSample sample(double u, double v, bool with_translation) const override {
    const RollingPoint p = roll_point(x0_, x_, u, v, with_translation);
    SeedSample s;
    s.x0 = with_translation ? p.x0 : x0_.point(u, v);
    s.n0 = p.n0;
    s.dx0 = p.dx0;
    s.dn0 = p.dn0;
    s.R = p.R;
    s.t = p.t;
    s.has_t = with_translation;
    s.omega = p.omega;
    s.K = p.K0;
    return s;
  }
  const Quadric& quadric() const override { return q_; }
  Domain domain() const override { return x0_.domain(); }
  std::string name() const override { return x_.name(); }

 private:
  SurfacePatch x0_, x_;
  Quadric q_;
};

class ReflectedSeed final : public SeedField {
 public:
  explicit ReflectedSeed(SeedPtr inner) : inner_(std::move(inner)) {}
  SeedSample sample(double u, double v, bool with_translation) const override {
    SeedSample s = inner_->sample(u, v, with_translation);
    const CVec3 p = s.R * s.x0 + s.t;
    s.R = s.R * (CMat3::Identity() - 2.0 * s.n0 * s.n0.transpose());
    s.omega.du = -s.omega.du - 2.0 * cross(s.n0, s.dn0.du);
    s.omega.dv = -s.omega.dv - 2.0 * cross(s.n0, s.dn0.dv);
    if (with_translation) s.t = p - s.R * s.x0;
    return s;
  }
  const Quadric& quadric() const override { return inner_->quadric(); }
  Domain domain() const override { return inner_->domain(); }
  std::string name() const override { return inner_->name() + "-reflected"; }

 private:
  SeedPtr inner_;
};

class LeafSeed final : public SeedField {
 public:
  LeafSeed(RunPtr run, double h) : run_(std::move(run)), h_(h) {}

  SeedSample sample(double u, double v, bool with_translation) const override {
    const BacklundRun& r = *run_;
    const ConfocalPair& pr = r.pair();
    const cplx y = r.v1_at(u, v);
    auto frame = [&](double du, double dv, bool wt, SeedSample* ps, TangencySolution* ptc, Rmpia* prm) {
      const cplx yy = r.step(u, v, y, du, dv);
      SeedSample s = r.seed().sample(u + du, v + dv, wt);
      TangencySolution tc = tangency_solve(pr.aux, s.x0, s.n0, yy);
      Rmpia rm = rmpia(pr, s.x0, s.n0, tc);
      CMat3 R1 = s.R * rm.R01.transpose();
      if (ps) *ps = s;
      if (ptc) *ptc = tc;
      if (prm) *prm = rm;
      return R1;
    };
    SeedSample s;
    TangencySolution tc;
    Rmpia rm;
    const CMat3 R1 = frame(0, 0, with_translation, &s, &tc, &rm);
    const CMat3 R1u = rdiff([&](double d) { return frame(d, 0, false, nullptr, nullptr, nullptr); }, h_);
    const CMat3 R1v = rdiff([&](double d) { return frame(0, d, false, nullptr, nullptr, nullptr); }, h_);

    const Quadric& q = pr.base.quadric();
    SeedSample out;
    out.x0 = rm.x01;
    const CVec3 ax = q.matrix() * out.x0;
    const cplx qn = std::sqrt(bsq(ax));
    out.n0 = ax / qn;
    const CMat3 rt = R1.transpose();
    out.omega.du = cross(out.n0, rt * R1u * out.n0);
    out.omega.dv = cross(out.n0, rt * R1v * out.n0);

    // chain rule through the TC solve for du1, dv1
    const MFields mf = m_fields(tc, s.n0, pr.z);
    const cplx k = -1.0 / (2.0 * pr.z);
    const cplx dv1u = k * bdot(mf.m, s.omega.du), dv1v = k * bdot(mf.m, s.omega.dv);
    const cplx an = bdot(tc.chart.xu, s.n0), bn = bdot(tc.chart.xv, s.n0);
    const cplx du1u = -(bdot(s.dn0.du, tc.V) + bn * dv1u) / an;
    const cplx du1v = -(bdot(s.dn0.dv, tc.V) + bn * dv1v) / an;
    const Jet2 bj = pr.base.eval(tc.u1, tc.v1);
    out.dx0.du = bj.xu * du1u + bj.xv * dv1u;
    out.dx0.dv = bj.xu * du1v + bj.xv * dv1v;
    auto dn = [&](const CVec3& dx) {
      const CVec3 adx = q.matrix() * dx;
      return CVec3((adx - out.n0 * bdot(out.n0, adx)) / qn);
    };
    out.dn0 = {dn(out.dx0.du), dn(out.dx0.dv)};
    out.R = R1;
    out.K = q.gauss_curvature(out.x0);
    if (with_translation) {
      const CVec3 x1 = s.R * tc.chart.x + s.t;
      out.t = x1 - R1 * out.x0;
      out.has_t = true;
    }
    return out;
  }
  const Quadric& quadric() const override { return run_->pair().base.quadric(); }
  Domain domain() const override { return run_->grid().dom; }
  std::string name() const override { return "leaf"; }

 private:
  RunPtr run_;
  double h_;
};

}  // namespace

SeedPtr rolled_seed(const SurfacePatch& x0, const SurfacePatch& x, const Quadric& q) {
  return std::make_shared<RolledSeed>(x0, x, q);
}

SeedPtr reflected_seed(SeedPtr inner) { return std::make_shared<ReflectedSeed>(std::move(inner)); }

SeedPtr leaf_seed(RunPtr run, double fd_step) { return std::make_shared<LeafSeed>(std::move(run), fd_step); }

}  // namespace bq
