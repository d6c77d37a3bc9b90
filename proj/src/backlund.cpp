#include "bq/backlund.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

namespace bq {

TangencySolution tangency_solve(const RulingChart& chart, const CVec3& x0, const CVec3& n0, cplx v1) {
  const CVec3 n = chart.frame().transpose() * n0;
  const cplx p = bdot(n0, x0);
  const cplx nf = bdot(n, f1()), nfb = bdot(n, f1bar()), ne = bdot(n, e3());
  const cplx c = ne - p - v1 * nf;
  const double scale = std::max(1.0, hnorm(n) * (1.0 + std::abs(v1)) + std::abs(p));
  if (std::abs(c) <= 1e-12 * scale) throw Error(Errc::RulingParallelToPlane, "ruling lies in the tangent plane");
  TangencySolution s;
  s.v1 = v1;
  s.u1 = -(2.0 * nfb + v1 * (ne + p)) / c;
  s.chart = chart.eval(s.u1, s.v1);
  s.V = s.chart.x - x0;
  return s;
}

MFields m_fields(const TangencySolution& s, const CVec3& n0, cplx z) {
  const cplx an = bdot(s.chart.xu, n0), bn = bdot(s.chart.xv, n0);
  const double sc = hnorm(s.chart.xu) * hnorm(s.chart.xv);
  if (std::abs(an * bn) <= 1e-14 * std::max(sc, 1e-300))
    throw Error(Errc::DegenerateDenominator, "a chart partial lies in the tangent plane");
  MFields f;
  f.B = -z / (an * bn);
  f.m = f.B * cross(s.chart.xu, s.V);
  f.mp = f.B * cross(s.chart.xv, s.V);
  return f;
}

Rmpia rmpia(const ConfocalPair& pair, const CVec3& x0, const CVec3& n0, const TangencySolution& tc) {
  Rmpia r;
  std::tie(r.u0, r.v0) = pair.base.locate(x0);
  const Jet2 xz0 = pair.aux.eval(r.u0, r.v0);
  const Jet2 x00 = pair.base.eval(r.u0, r.v0);
  const Jet2 x01 = pair.base.eval(tc.u1, tc.v1);
  r.x01 = x01.x;
  const CVec3 v10 = xz0.x - x01.x;
  CMat3 l, rt;
  l.col(0) = tc.V;
  l.col(1) = tc.chart.xu;
  l.col(2) = x00.xu;
  rt.col(0) = -v10;
  rt.col(1) = x01.xu;
  rt.col(2) = xz0.xu;
  r.R01 = rt * l.inverse();
  r.orthogonality = (r.R01.transpose() * r.R01 - CMat3::Identity()).norm();
  const CMat3 refl = CMat3::Identity() - 2.0 * n0 * n0.transpose();
  r.reflection = hnorm(r.R01 * refl * tc.chart.xv - x01.xv);
  return r;
}

BacklundRun::BacklundRun(SeedPtr seed, const ConfocalPair& pair, const BacklundSpec& spec)
    : seed_(std::move(seed)), pair_(pair), spec_(spec) {}

RunPtr BacklundRun::integrate(SeedPtr seed, const ConfocalFamily& fam, const BacklundSpec& spec, FrameKind frame) {
  if (spec.z == 0.0) throw Error(Errc::ZeroSpectralParameter, "z = 0");
  return integrate(std::move(seed), confocal_pair(fam, spec.z, frame), spec);
}

RunPtr BacklundRun::integrate(SeedPtr seed, const ConfocalPair& pair, const BacklundSpec& spec) {
  if (pair.z == 0.0) throw Error(Errc::ZeroSpectralParameter, "z = 0");
  if (spec.family == Family::BPrime) seed = reflected_seed(seed);
  std::shared_ptr<BacklundRun> r(new BacklundRun(std::move(seed), pair, spec));
  r->run();
  return r;
}

OneForm1 BacklundRun::rhs(const SeedSample& s, cplx v1) const {
  const TangencySolution tc = tangency_solve(pair_.aux, s.x0, s.n0, v1);
  const MFields mf = m_fields(tc, s.n0, pair_.z);
  const cplx k = -1.0 / (2.0 * pair_.z);
  return {k * bdot(mf.m, s.omega.du), k * bdot(mf.m, s.omega.dv)};
}

OneForm1 BacklundRun::rhs(double u, double v, cplx v1) const { return rhs(seed_->sample(u, v, false), v1); }

cplx BacklundRun::step(double u, double v, cplx y, double du, double dv) const {
  if (du == 0.0 && dv == 0.0) return y;
  // projective fallback: track w = 1/v1 while |v1| > 1
  const bool inv = std::abs(y) > 1.0;
  auto f = [&](double t, cplx w) {
    const cplx val = inv ? 1.0 / w : w;
    const OneForm1 r = rhs(u + t * du, v + t * dv, val);
    const cplx d = r.du * du + r.dv * dv;
    return inv ? -w * w * d : d;
  };
  const cplx w0 = inv ? 1.0 / y : y;
  const cplx k1 = f(0.0, w0);
  const cplx k2 = f(0.5, w0 + 0.5 * k1);
  const cplx k3 = f(0.5, w0 + 0.5 * k2);
  const cplx k4 = f(1.0, w0 + k3);
  const cplx w1 = w0 + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  if (!std::isfinite(w1.real()) || !std::isfinite(w1.imag()) || std::abs(w1) > spec_.blowup_bound)
    throw Error(Errc::RicattiBlowup, "at (u,v) = (" + std::to_string(u + du) + ", " + std::to_string(v + dv) + ")");
  return inv ? 1.0 / w1 : w1;
}

cplx BacklundRun::march(double u, double v, cplx y, double du, double dv, int steps) const {
  for (int k = 0; k < steps; ++k) y = step(u + k * du, v + k * dv, y, du, dv);
  return y;
}

void BacklundRun::run() {
  const Grid& g = spec_.grid;
  bi_ = int(std::lround((spec_.base_u - g.dom.u0) / g.du()));
  bj_ = int(std::lround((spec_.base_v - g.dom.v0) / g.dv()));
  if (bi_ < 0 || bi_ >= g.nu || bj_ < 0 || bj_ >= g.nv || std::abs(g.u(bi_) - spec_.base_u) > 1e-9 * g.du() ||
      std::abs(g.v(bj_) - spec_.base_v) > 1e-9 * g.dv())
    throw Error(Errc::InvalidArgument, "base point must be a grid node");

  auto sweep = [&](std::vector<cplx>& out, bool rows_first) {
    out.assign(g.size(), cplx(0.0));
    out[g.index(bi_, bj_)] = spec_.v1_0;
    if (rows_first) {
      for (int i = bi_ + 1; i < g.nu; ++i) out[g.index(i, bj_)] = step(g.u(i - 1), g.v(bj_), out[g.index(i - 1, bj_)], g.du(), 0);
      for (int i = bi_ - 1; i >= 0; --i) out[g.index(i, bj_)] = step(g.u(i + 1), g.v(bj_), out[g.index(i + 1, bj_)], -g.du(), 0);
      for (int i = 0; i < g.nu; ++i) {
        for (int j = bj_ + 1; j < g.nv; ++j) out[g.index(i, j)] = step(g.u(i), g.v(j - 1), out[g.index(i, j - 1)], 0, g.dv());
        for (int j = bj_ - 1; j >= 0; --j) out[g.index(i, j)] = step(g.u(i), g.v(j + 1), out[g.index(i, j + 1)], 0, -g.dv());
      }
    } else {
      for (int j = bj_ + 1; j < g.nv; ++j) out[g.index(bi_, j)] = step(g.u(bi_), g.v(j - 1), out[g.index(bi_, j - 1)], 0, g.dv());
      for (int j = bj_ - 1; j >= 0; --j) out[g.index(bi_, j)] = step(g.u(bi_), g.v(j + 1), out[g.index(bi_, j + 1)], 0, -g.dv());
      for (int j = 0; j < g.nv; ++j) {
        for (int i = bi_ + 1; i < g.nu; ++i) out[g.index(i, j)] = step(g.u(i - 1), g.v(j), out[g.index(i - 1, j)], g.du(), 0);
        for (int i = bi_ - 1; i >= 0; --i) out[g.index(i, j)] = step(g.u(i + 1), g.v(j), out[g.index(i + 1, j)], -g.du(), 0);
      }
    }
  };
  sweep(v1_, true);
  if (spec_.column_pass) {
    std::vector<cplx> alt;
    sweep(alt, false);
    for (int k = 0; k < g.size(); ++k) {
      // compare in the chart where both values are bounded
      const double d = (std::abs(v1_[k]) > 1.0 && std::abs(alt[k]) > 1.0) ? std::abs(1.0 / v1_[k] - 1.0 / alt[k])
                                                                          : std::abs(v1_[k] - alt[k]);
      path_indep_ = std::max(path_indep_, d);
    }
  }
  nodes_.reserve(g.size());
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      nodes_.push_back(leaf_at(g.u(i), g.v(j), v1_[g.index(i, j)], true));
      const LeafPoint& l = nodes_.back();
      tc_res_ = std::max(tc_res_, std::abs(bdot(l.tc.V, l.seed.n0)));
    }
}

cplx BacklundRun::v1_at(double u, double v) const {
  const Grid& g = grid();
  const int i = std::clamp(int(std::lround((u - g.dom.u0) / g.du())), 0, g.nu - 1);
  const int j = std::clamp(int(std::lround((v - g.dom.v0) / g.dv())), 0, g.nv - 1);
  const double du = u - g.u(i), dv = v - g.v(j);
  if (std::abs(du) > 1.01 * g.du() || std::abs(dv) > 1.01 * g.dv())
    throw Error(Errc::InvalidArgument, "point outside the integrated grid");
  return step(g.u(i), g.v(j), v1_[g.index(i, j)], du, dv);
}

LeafPoint BacklundRun::leaf_at(double u, double v, cplx y, bool with_translation) const {
  LeafPoint l;
  l.seed = seed_->sample(u, v, with_translation);
  l.tc = tangency_solve(pair_.aux, l.seed.x0, l.seed.n0, y);
  l.mf = m_fields(l.tc, l.seed.n0, pair_.z);
  const cplx k = -1.0 / (2.0 * pair_.z);
  l.dv1 = {k * bdot(l.mf.m, l.seed.omega.du), k * bdot(l.mf.m, l.seed.omega.dv)};
  const cplx an = bdot(l.tc.chart.xu, l.seed.n0), bn = bdot(l.tc.chart.xv, l.seed.n0);
  l.du1.du = -(bdot(l.seed.dn0.du, l.tc.V) + bn * l.dv1.du) / an;
  l.du1.dv = -(bdot(l.seed.dn0.dv, l.tc.V) + bn * l.dv1.dv) / an;
  l.n1 = unit(l.seed.R * l.mf.m);
  l.ns = l.seed.R * l.seed.n0;
  if (with_translation) {
    l.x1 = l.seed.R * l.tc.chart.x + l.seed.t;
    l.xs = l.seed.R * l.seed.x0 + l.seed.t;
  }
  return l;
}

Jet2 leaf_jet(const BacklundRun& run, int i, int j, const LeafJetOptions& opt) {
  const double u = run.grid().u(i), v = run.grid().v(j), h = opt.h;
  const cplx y0 = run.v1(i, j);
  auto p = [&](double du, double dv) {
    const cplx y = run.step(u, v, y0, du, dv);
    const LeafPoint l = run.leaf_at(u + du, v + dv, y, true);
    return CVec3(l.x1 + opt.normal_offset * l.n1);
  };
  const CVec3 c = p(0, 0);
  const CVec3 up1 = p(h, 0), um1 = p(-h, 0), up2 = p(2 * h, 0), um2 = p(-2 * h, 0);
  const CVec3 up3 = p(3 * h, 0), um3 = p(-3 * h, 0);
  const CVec3 vp1 = p(0, h), vm1 = p(0, -h), vp2 = p(0, 2 * h), vm2 = p(0, -2 * h);
  const CVec3 vp3 = p(0, 3 * h), vm3 = p(0, -3 * h);
  // sixth order central stencils
  Jet2 J;
  J.x = c;
  J.xu = (45.0 * (up1 - um1) - 9.0 * (up2 - um2) + (up3 - um3)) / (60 * h);
  J.xv = (45.0 * (vp1 - vm1) - 9.0 * (vp2 - vm2) + (vp3 - vm3)) / (60 * h);
  J.xuu = (270.0 * (up1 + um1) - 27.0 * (up2 + um2) + 2.0 * (up3 + um3) - 490.0 * c) / (180 * h * h);
  J.xvv = (270.0 * (vp1 + vm1) - 27.0 * (vp2 + vm2) + 2.0 * (vp3 + vm3) - 490.0 * c) / (180 * h * h);
  const CVec3 m1 = (p(h, h) - p(h, -h) - p(-h, h) + p(-h, -h)) / (4 * h * h);
  const CVec3 m2 = (p(2 * h, 2 * h) - p(2 * h, -2 * h) - p(-2 * h, 2 * h) + p(-2 * h, -2 * h)) / (16 * h * h);
  J.xuv = (4.0 * m1 - m2) / 3.0;
  return J;
}

LeafChecks leaf_checks(const BacklundRun& run, const CheckOptions& opt) {
  LeafChecks out;
  const Grid& g = run.grid();
  if (opt.weingarten) {
    double wmax = 0;
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j < g.nv; ++j) {
        const SeedSample& s = run.node(i, j).seed;
        wmax = std::max({wmax, hnorm(s.omega.du), hnorm(s.omega.dv)});
      }
    if (wmax <= 1e-13) throw Error(Errc::DegenerateLeaf, "seed has omega = 0, the leaf is a ruling");
  }
  std::optional<ConfocalPair> model;
  if (opt.linel_z) model = confocal_pair(ConfocalFamily(run.pair().base.quadric()), *opt.linel_z);

  for (int i = 0; i < g.nu; i += opt.stride)
    for (int j = 0; j < g.nv; j += opt.stride) {
      const LeafPoint& l = run.node(i, j);
      const Jet2 J = leaf_jet(run, i, j, {opt.h, 0.0});
      const std::array<CVec3, 2> dx{J.xu, J.xv};
      const std::array<cplx, 2> du1{l.du1.du, l.du1.dv}, dv1{l.dv1.du, l.dv1.dv};
      CVec3 a = l.tc.chart.xu, b = l.tc.chart.xv;
      if (model) {
        const Jet2 mj = model->aux.eval(l.tc.u1, l.tc.v1);
        a = mj.xu;
        b = mj.xv;
      }
      const cplx ab = bdot(a, l.seed.n0) * bdot(b, l.seed.n0);
      const Jet2 x01 = run.pair().base.eval(l.tc.u1, l.tc.v1);
      for (int p = 0; p < 2; ++p)
        for (int q = p; q < 2; ++q) {
          const cplx meas = bdot(dx[p], dx[q]);
          const CVec3 zp = a * du1[p] + b * dv1[p], zq = a * du1[q] + b * dv1[q];
          const cplx pred = bdot(zp, zq) - 2.0 * ab * (du1[p] * dv1[q] + du1[q] * dv1[p]);
          out.linel = std::max(out.linel, std::abs(meas - pred));
          CVec3 ip, iq;
          if (opt.acpia_identity) {
            ip = l.tc.chart.xu * du1[p] + l.tc.chart.xv * dv1[p];
            iq = l.tc.chart.xu * du1[q] + l.tc.chart.xv * dv1[q];
          } else {
            ip = x01.xu * du1[p] + x01.xv * dv1[p];
            iq = x01.xu * du1[q] + x01.xv * dv1[q];
          }
          out.acpia = std::max(out.acpia, std::abs(meas - bdot(ip, iq)));
        }
      const CVec3 d = l.x1 - l.xs;
      out.join_seed = std::max(out.join_seed, std::abs(bdot(d, l.ns)));
      const CVec3 nmeas = unit(cross(J.xu, J.xv));
      out.join_leaf = std::max(out.join_leaf, std::abs(bdot(d, nmeas)));
      out.leaf_tangency = std::max({out.leaf_tangency, std::abs(bdot(l.n1, J.xu)), std::abs(bdot(l.n1, J.xv))});
      if (opt.weingarten) {
        Jet2 Jw = J;
        CVec3 dw = d;
        if (opt.normal_offset != 0.0) {
          Jw = leaf_jet(run, i, j, {opt.h, opt.normal_offset});
          dw = Jw.x - l.xs;
        }
        const cplx k1 = eval_geometry(Jw).K;
        const cplx d4 = bsq(dw) * bsq(dw);
        const cplx s2 = bsq(cross(l.ns, l.n1));
        const cplx lhs = l.seed.K * k1 * d4;
        out.weingarten = std::max(out.weingarten, std::abs(lhs - s2 * s2) / std::abs(lhs));
      }
    }
  return out;
}

double ricatti_quadratic_residual(const BacklundRun& run, int i, int j) {
  const SeedSample s = run.seed().sample(run.grid().u(i), run.grid().v(j), false);
  const cplx y0 = run.v1(i, j);
  const double dy = 0.3;
  std::array<OneForm1, 4> f;
  for (int k = 0; k < 4; ++k) f[k] = run.rhs(s, y0 + double(k - 1) * dy);
  double mag = 1e-300, res = 0;
  for (const auto& r : f) mag = std::max({mag, std::abs(r.du), std::abs(r.dv)});
  res = std::max(std::abs(f[3].du - (f[0].du - 3.0 * f[1].du + 3.0 * f[2].du)),
                 std::abs(f[3].dv - (f[0].dv - 3.0 * f[1].dv + 3.0 * f[2].dv)));
  return res / mag;
}

}  // namespace bq
