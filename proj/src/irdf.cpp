#include "bq/irdf.hpp"

#include <cmath>
#include <random>

namespace bq {

namespace {

template <class F>
auto d_u(const F& f, double u, double v, double w, double h) {
  return rdiff([&](double d) { return f(u + d, v, w); }, h);
}
template <class F>
auto d_v(const F& f, double u, double v, double w, double h) {
  return rdiff([&](double d) { return f(u, v + d, w); }, h);
}
template <class F>
auto d_w(const F& f, double u, double v, double w, double h) {
  return rdiff([&](double d) { return f(u, v, w + d); }, h);
}

template <class F>
void each_point(const Lattice& l, const F& f) {
  for (int i = 0; i < l.nu; ++i)
    for (int j = 0; j < l.nv; ++j)
      for (int k = 0; k < l.nw; ++k) f(l.u(i), l.v(j), l.w(k));
}

// first order data of a tangential field at one point
struct Local {
  SymTcSample s;
  CVec3 Va[2], Xa[2], Vw;
  cplx D{};  // N0^T (dw V x V)
};

Local local(const SymTcField& f, double u, double v, double w, double h) {
  Local l;
  l.s = f.fn(u, v, w);
  auto V = [&](double a, double b, double c) { return f.fn(a, b, c).V; };
  auto X = [&](double a, double b, double c) { return f.fn(a, b, c).x0; };
  l.Va[0] = d_u(V, u, v, w, h);
  l.Va[1] = d_v(V, u, v, w, h);
  l.Vw = d_w(V, u, v, w, h);
  l.Xa[0] = d_u(X, u, v, w, h);
  l.Xa[1] = d_v(X, u, v, w, h);
  l.D = bdot(l.s.n0, cross(l.Vw, l.s.V));
  return l;
}

// 2 [dw V x d(V + x0)]^T ^ (V x dx0) and (dw V x V)^T (dx0 x^ dx0), du^dv coefficients
std::pair<cplx, cplx> eq1_parts(const Local& l) {
  const CVec3& V = l.s.V;
  const cplx num = 2.0 * (bdot(cross(l.Vw, l.Va[0] + l.Xa[0]), cross(V, l.Xa[1])) -
                          bdot(cross(l.Vw, l.Va[1] + l.Xa[1]), cross(V, l.Xa[0])));
  const cplx den = 2.0 * bdot(cross(l.Vw, V), cross(l.Xa[0], l.Xa[1]));
  return {num, den};
}

cplx wnum(const Local& l) {
  return 2.0 * (bdot(cross(l.Vw, l.Va[0]), cross(l.Vw, l.Xa[1])) -
                bdot(cross(l.Vw, l.Va[1]), cross(l.Vw, l.Xa[0])));
}

cplx H(const Local& l, int a) { return bdot(l.s.n0, cross(l.s.V, l.Va[a] + l.Xa[a])) / l.D; }
cplx G(const Local& l, int a) { return bdot(l.s.n0, cross(l.Vw, l.Va[a])) / l.D; }
cplx F(const Local& l, int a) { return bdot(l.s.n0, cross(l.Vw, l.Va[a] + l.Xa[a])) / l.D; }

void check_nondegenerate(const SymTcField& f, double h) {
  int flat = 0, total = 0;
  each_point(f.lat, [&](double u, double v, double w) {
    ++total;
    if (std::abs(f.fn(u, v, w).K) < 1e-10) ++flat;
  });
  if (flat * 10 > total) throw Error(Errc::DegenerateField, "base surface is developable on the lattice");
  each_point(f.lat, [&](double u, double v, double w) {
    const Local l = local(f, u, v, w, h);
    if (std::abs(l.D) <= 1e-12 * std::max(1.0, l.s.V.squaredNorm()))
      throw Error(Errc::DegenerateField, "V x dw V vanishes");
  });
}

std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace

IcGeneral ic_general_residual(const FacetField& f, double h) {
  IcGeneral r;
  auto P = [&](double u, double v, double w) { return f.fn(u, v, w).p; };
  auto M = [&](double u, double v, double w) {
    const CVec3 m = f.fn(u, v, w).m;
    return CVec3(m / m.norm());
  };
  each_point(f.lat, [&](double u, double v, double w) {
    const CVec3 m = M(u, v, w);
    const std::array<CVec3, 3> dp{d_u(P, u, v, w, h), d_v(P, u, v, w, h), d_w(P, u, v, w, h)};
    const std::array<CVec3, 3> dm{d_u(M, u, v, w, h), d_v(M, u, v, w, h), d_w(M, u, v, w, h)};
    if (std::abs(bdot(m, dp[2])) <= 1e-10 * std::max(1.0, dp[2].norm()))
      throw Error(Errc::TransversalityFailure, "m^T dw p vanishes");
    auto coef = [&](int a, int b) {
      const cplx t1 = bdot(cross(dp[a], dp[2]), cross(m, dm[b])) - bdot(cross(dp[b], dp[2]), cross(m, dm[a]));
      const cplx t2 = bdot(cross(dm[2], m), cross(dp[a], dp[b]));
      return std::abs(t1 + t2);
    };
    r.uv = std::max(r.uv, coef(0, 1));
    r.uw = std::max(r.uw, coef(0, 2));
    r.vw = std::max(r.vw, coef(1, 2));
  });
  return r;
}

SymTcResidual ic_symtc_residual(const SymTcField& f, double h) {
  check_nondegenerate(f, h);
  SymTcResidual r;
  auto mb = [&](double u, double v, double w) { return f.fn(u, v, w).mb; };
  each_point(f.lat, [&](double u, double v, double w) {
    const Local l = local(f, u, v, w, h);
    const auto [num, den] = eq1_parts(l);
    const cplx m = l.s.mb;
    r.eq1 = std::max(r.eq1, std::abs(num / den + (m * m + bsq(l.s.V)) * l.s.K));
    const cplx mw = d_w(mb, u, v, w, h);
    const cplx ma[2] = {d_u(mb, u, v, w, h), d_v(mb, u, v, w, h)};
    for (int a = 0; a < 2; ++a) r.eq2 = std::max(r.eq2, std::abs(ma[a] + mw * H(l, a) - m * G(l, a)));
  });
  return r;
}

Theorem1Residual theorem1_residual(const SymTcField& f, double h) {
  check_nondegenerate(f, h);
  Theorem1Residual r;
  auto mb = [&](double u, double v, double w) { return f.fn(u, v, w).mb; };
  auto Fa = [&](int a) {
    return [&f, a, h](double u, double v, double w) { return F(local(f, u, v, w, h), a); };
  };
  auto Q = [&](double u, double v, double w) {
    const Local l = local(f, u, v, w, h);
    const auto [num, den] = eq1_parts(l);
    return num / (l.s.K * den) + bsq(l.s.V);
  };
  each_point(f.lat, [&](double u, double v, double w) {
    const Local l = local(f, u, v, w, h);
    const auto [num, den] = eq1_parts(l);
    const CVec3& V = l.s.V;
    const cplx K = l.s.K;
    cplx S[2], T[2];
    for (int a = 0; a < 2; ++a) {
      S[a] = bdot(l.s.n0, cross(V, l.Xa[a]));
      T[a] = bdot(l.s.n0, cross(l.Vw, l.Xa[a]));
    }
    const cplx Fw[2] = {d_w(Fa(0), u, v, w, h), d_w(Fa(1), u, v, w, h)};
    const cplx eqA = (Fw[0] * S[1] - Fw[1] * S[0]) - (G(l, 0) * T[1] - G(l, 1) * T[0]);
    r.eqA = std::max(r.eqA, std::abs(eqA));

    const cplx q = num / (K * den) + bsq(V);
    const cplx p = wnum(l) / (K * den) + bdot(V, l.Vw);
    const cplx Qa[2] = {d_u(Q, u, v, w, h), d_v(Q, u, v, w, h)};
    for (int a = 0; a < 2; ++a) r.eqB = std::max(r.eqB, std::abs(0.5 * Qa[a] + p * H(l, a) - q * G(l, a)));

    const cplx mw = d_w(mb, u, v, w, h);
    r.wcoco = std::max(r.wcoco, std::abs(wnum(l) / den + (l.s.mb * mw + bdot(V, l.Vw)) * K));
  });
  return r;
}

FacetField sphere_family_field() {
  FacetField f;
  f.name = "sphere-family";
  f.lat = Lattice{0.3, 1.0, 0.0, 1.0, 0.0, 1.0, 5, 5, 5};
  f.fn = [](double u, double v, double w) {
    const CVec3 n(std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u));
    FacetSample s;
    s.p = w * e3() + (1.0 + 0.3 * w) * n;
    s.m = n;
    return s;
  };
  return f;
}

FacetField confocal_facet_field(const SurfacePatch& x0, const Quadric& q, const RulingChart& aux, cplx z,
                                const Lattice& lat) {
  FacetField f;
  f.name = "confocal-tc";
  f.lat = lat;
  f.fn = [x0, q, aux, z](double u, double v, double w) {
    const CVec3 p = x0.point(u, v);
    const CVec3 n = q.normal(p);
    const TangencySolution tc = tangency_solve(aux, p, n, w);
    FacetSample s;
    s.p = tc.chart.x;
    s.m = m_fields(tc, n, z).m;
    return s;
  };
  return f;
}

SymTcField confocal_symtc_field(const SurfacePatch& x0, const Quadric& q, const RulingChart& aux, cplx z,
                                const Lattice& lat) {
  SymTcField f;
  f.name = "confocal-symtc";
  f.lat = lat;
  f.fn = [x0, q, aux, z](double u, double v, double w) {
    SymTcSample s;
    s.x0 = x0.point(u, v);
    s.n0 = q.normal(s.x0);
    const TangencySolution tc = tangency_solve(aux, s.x0, s.n0, w);
    s.V = tc.V;
    const CVec3 m = m_fields(tc, s.n0, z).m;
    // m = c (V x N0 + mb N0)
    s.mb = bdot(m, s.n0) * bsq(s.V) / bdot(m, cross(s.V, s.n0));
    s.K = q.gauss_curvature(s.x0);
    return s;
  };
  return f;
}

FacetField perturbed_field(const FacetField& f, double eps, std::uint64_t seed) {
  auto g = rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::array<CVec3, 4> r;
  for (auto& c : r) c = CVec3(dist(g), dist(g), dist(g));
  FacetField out = f;
  out.name = f.name + "-perturbed";
  out.fn = [inner = f.fn, r, eps](double u, double v, double w) {
    FacetSample s = inner(u, v, w);
    s.m = s.m / s.m.norm() + eps * (r[0] + u * r[1] + v * r[2] + w * r[3]);
    return s;
  };
  return out;
}

SymTcField shifted_mb(const SymTcField& f, cplx delta) {
  SymTcField out = f;
  out.name = f.name + "-shifted";
  out.fn = [inner = f.fn, delta](double u, double v, double w) {
    SymTcSample s = inner(u, v, w);
    s.mb += delta;
    return s;
  };
  return out;
}

SymTcField planar_symtc_field() {
  SymTcField f;
  f.name = "planar";
  f.lat = Lattice{0, 1, 0, 1, 0, 1, 3, 3, 3};
  f.fn = [](double u, double v, double w) {
    SymTcSample s;
    s.x0 = CVec3(u, v, 0);
    s.n0 = e3();
    s.V = CVec3(1.0 + w, 1.0 - u * w, 0);
    s.mb = 1.0;
    s.K = 0.0;
    return s;
  };
  return f;
}

ChartFn chart_fn(const RulingChart& c) {
  return [c](cplx u, cplx v) { return c.eval(u, v); };
}

ChartFn torus_chart(double big_r, double small_r) {
  return [big_r, small_r](cplx u, cplx v) {
    const cplx su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
    const cplx rr = big_r + small_r * cu;
    Jet2 j;
    j.x = CVec3(rr * cv, rr * sv, small_r * su);
    j.xu = CVec3(-small_r * su * cv, -small_r * su * sv, small_r * cu);
    j.xv = CVec3(-rr * sv, rr * cv, 0.0);
    j.xuu = CVec3(-small_r * cu * cv, -small_r * cu * sv, -small_r * su);
    j.xuv = CVec3(small_r * su * sv, -small_r * su * cv, 0.0);
    j.xvv = CVec3(-rr * cv, -rr * sv, 0.0);
    return j;
  };
}

std::vector<TcSample> tc_samples(const SurfacePatch& x0, const Quadric& q, const RulingChart& aux, int n,
                                 std::uint64_t seed, double vlo, double vhi) {
  auto g = rng(seed);
  const Domain d = x0.domain();
  std::uniform_real_distribution<double> du(d.u0, d.u1), dv(d.v0, d.v1), dw(vlo, vhi);
  std::vector<TcSample> out;
  for (int attempt = 0; attempt < 50 * n && int(out.size()) < n; ++attempt) {
    const double u = du(g), v = dv(g), w = dw(g);
    TcSample s;
    s.x0 = x0.point(u, v);
    s.n0 = q.normal(s.x0);
    try {
      const TangencySolution tc = tangency_solve(aux, s.x0, s.n0, w);
      if (std::abs(tc.u1 - tc.v1) < 0.2) continue;
      if (std::abs(bdot(s.n0, tc.V)) > 1e-10 * std::max(1.0, tc.V.norm())) continue;
      s.u1 = tc.u1;
      s.v1 = tc.v1;
    } catch (const Error&) {
      continue;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<TcSample> synthetic_tc_samples(const ChartFn& chart, int n, std::uint64_t seed) {
  auto g = rng(seed);
  std::uniform_real_distribution<double> dp(0.2, 1.2), dr(-1.0, 1.0);
  std::vector<TcSample> out;
  for (int k = 0; k < n; ++k) {
    TcSample s;
    s.u1 = dp(g);
    s.v1 = dp(g);
    const CVec3 nn(dr(g), dr(g), dr(g));
    const CVec3 r(dr(g), dr(g), dr(g));
    s.n0 = unit(nn);
    s.x0 = chart(s.u1, s.v1).x - 0.5 * unit(cross(s.n0, r));
    out.push_back(s);
  }
  return out;
}

double int_residual(const ChartFn& chart, const std::vector<TcSample>& s) {
  double r = 0;
  for (const TcSample& t : s) {
    const Jet2 j = chart(t.u1, t.v1);
    const CVec3& N = t.n0;
    const CVec3 V = j.x - t.x0;
    CVec3 l = j.xu * bdot(j.xv, N) + j.xv * bdot(j.xu, N);
    l -= N * bdot(N, l);
    const CVec3 res = l - bdot(j.xuv, N) * V;
    r = std::max(r, res.norm() / std::max(1.0, j.xu.norm() * j.xv.norm()));
  }
  return r;
}

FinaResult fina_residual(const ChartFn& chart, const std::vector<TcSample>& s) {
  FinaResult f;
  bool straight = true;
  for (const TcSample& t : s) {
    const Jet2 j = chart(t.u1, t.v1);
    const CVec3& N = t.n0;
    const CVec3 su = cross(j.xuu, j.xu), sv = cross(j.xvv, j.xv);
    const cplx an = bdot(j.xu, N), bn = bdot(j.xv, N);
    const CVec3 res = cross(CVec3(su / (an * an * an) - sv / (bn * bn * bn)), N);
    f.residual = std::max(f.residual, res.norm());
    const double ru = su.norm() / std::max(1.0, j.xuu.norm() * j.xu.norm());
    const double rv = sv.norm() / std::max(1.0, j.xvv.norm() * j.xv.norm());
    f.straight_u = std::max(f.straight_u, ru);
    f.straight_v = std::max(f.straight_v, rv);
    if (ru > 1e-9 || rv > 1e-9) straight = false;
  }
  f.doubly_ruled = straight;
  return f;
}

Quadric perturbed_quadric(const Quadric& q, double eps) {
  CMat3 p = CMat3::Zero();
  p(0, 1) = p(1, 0) = 1.0;
  return Quadric(q.matrix() + eps * p);
}

RulingChart perturbed_chart(const RulingChart& c, double eps) {
  const Quadric q = perturbed_quadric(c.quadric(), eps);
  const CMat3 s0 = sym_sqrt(c.quadric().inverse());
  const CMat3 se = sym_sqrt_near(q.inverse(), s0);
  return RulingChart(q, se * s0.inverse() * c.frame());
}

}  // namespace bq
