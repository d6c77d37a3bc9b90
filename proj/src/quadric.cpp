#include "bq/quadric.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace bq {

namespace {

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// pins the sign of negligible imaginary parts so the principal sqrt branch is stable
cplx clean(cplx l) {
  if (std::abs(l.imag()) <= 1e-14 * std::max(1.0, std::abs(l))) return {l.real(), 0.0};
  return l;
}

void check_kernel(const CMat3& m) {
  Eigen::JacobiSVD<CMat3> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = std::max(s(0), 1e-300);
  std::vector<int> ker;
  for (int i = 0; i < 3; ++i)
    if (s(i) <= 1e-12 * std::max(1.0, smax) || s(i) == 0.0) ker.push_back(i);
  if (ker.empty() || ker.size() == 3) return;
  Eigen::MatrixXcd k(3, ker.size());
  for (size_t c = 0; c < ker.size(); ++c) k.col(c) = svd.matrixV().col(ker[c]);
  const cplx g = (k.transpose() * k).determinant();
  if (std::abs(g) <= 1e-9) throw Error(Errc::IsotropicKernel, "kernel contains an isotropic vector");
}

double cond(const CMat3& p) {
  Eigen::JacobiSVD<CMat3> svd(p);
  const auto& s = svd.singularValues();
  if (s(2) == 0.0) return 1e300;
  return s(0) / s(2);
}

}  // namespace

Jet2 sphere_chart(cplx u, cplx v, double pole_tol) {
  const cplx d = u - v;
  if (std::abs(d) <= pole_tol * std::max({1.0, std::abs(u), std::abs(v)}))
    throw Error(Errc::ChartPole, "u = v");
  const CVec3 F = f1(), Fb = f1bar(), E = e3();
  const CVec3 yv = -v * v * F + 2.0 * Fb + 2.0 * v * E;
  const CVec3 yu = -u * u * F + 2.0 * Fb + 2.0 * u * E;
  Jet2 j;
  j.x = (-u * v * F + 2.0 * Fb + (u + v) * E) / d;
  const cplx d2 = d * d, d3 = d2 * d;
  j.xu = -yv / d2;
  j.xv = yu / d2;
  j.xuu = 2.0 * yv / d3;
  j.xvv = 2.0 * yu / d3;
  j.xuv = -2.0 * j.x / d2;
  return j;
}

Jet2 paraboloid_chart(cplx u, cplx v) {
  const CVec3 F = f1(), Fb = f1bar(), E = e3();
  Jet2 j;
  j.x = u * F + v * Fb + u * v * E;
  j.xu = F + v * E;
  j.xv = Fb + u * E;
  j.xuv = E;
  return j;
}

ConeRuling cone_ruling(cplx v) {
  const CVec3 F = f1(), Fb = f1bar(), E = e3();
  return {-v * v * F + 2.0 * Fb + 2.0 * v * E, -2.0 * v * F + 2.0 * E, -2.0 * F};
}

std::pair<cplx, cplx> sphere_chart_inverse(const CVec3& p, double tol) {
  const cplx cfb = bdot(f1(), p);
  const cplx ce = bdot(e3(), p);
  if (std::abs(cfb) <= tol * std::max(1.0, hnorm(p))) throw Error(Errc::ChartPole, "point at the chart pole");
  return {(1.0 + ce) / cfb, (ce - 1.0) / cfb};
}

CMat3 sym_sqrt(const CMat3& m) {
  if (!is_symmetric(m, 1e-12)) throw Error(Errc::NotSymmetric, "sym_sqrt needs a symmetric matrix");
  check_kernel(m);
  Eigen::ComplexEigenSolver<CMat3> es(m);
  const CMat3 p = es.eigenvectors();
  CMat3 s;
  if (cond(p) < 1e8) {
    CMat3 d = CMat3::Zero();
    for (int i = 0; i < 3; ++i) d(i, i) = std::sqrt(clean(es.eigenvalues()(i)));
    s = p * d * p.inverse();
  } else {
    // not diagonalizable: Schur based square root
    s = m.sqrt();
  }
  s = (0.5 * (s + s.transpose())).eval();
  if ((s * s - m).norm() > 1e-10 * mscale(m))
    throw Error(Errc::IsotropicKernel, "no symmetric square root found");
  return s;
}

CMat3 sym_sqrt_near(const CMat3& m, const CMat3& prev) {
  if (!is_symmetric(m, 1e-12)) throw Error(Errc::NotSymmetric, "sym_sqrt needs a symmetric matrix");
  check_kernel(m);
  Eigen::ComplexEigenSolver<CMat3> es(m);
  const CMat3 p = es.eigenvectors();
  if (cond(p) >= 1e8) return sym_sqrt(m);
  const CMat3 pinv = p.inverse();
  CMat3 best = CMat3::Zero();
  double bestd = 1e300;
  for (int mask = 0; mask < 8; ++mask) {
    CMat3 d = CMat3::Zero();
    for (int i = 0; i < 3; ++i) {
      const cplx r = std::sqrt(clean(es.eigenvalues()(i)));
      d(i, i) = (mask >> i & 1) ? -r : r;
    }
    CMat3 s = p * d * pinv;
    s = (0.5 * (s + s.transpose())).eval();
    const double dist = (s - prev).norm();
    if (dist < bestd) {
      bestd = dist;
      best = s;
    }
  }
  return best;
}

Quadric::Quadric(const CMat3& a) : a_(a) {
  if (!is_symmetric(a, 1e-12)) throw Error(Errc::NotSymmetric, "quadric matrix must be symmetric");
  const double sc = mscale(a);
  if (std::abs(a.determinant()) <= 1e-13 * sc * sc * sc)
    throw Error(Errc::InvalidArgument, "quadric matrix is singular");
  a_ = 0.5 * (a + a.transpose());
  ainv_ = a_.inverse();
  ainv_ = (0.5 * (ainv_ + ainv_.transpose())).eval();
}

cplx Quadric::gauss_curvature(const CVec3& x) const {
  const CVec3 ax = a_ * x;
  const cplx q = bsq(ax);
  return a_.determinant() / (q * q);
}

ConfocalFamily::ConfocalFamily(const Quadric& base) : base_(base) {
  Eigen::ComplexEigenSolver<CMat3> es(base.inverse(), false);
  for (int i = 0; i < 3; ++i) sing_[i] = clean(es.eigenvalues()(i));
  std::sort(sing_.begin(), sing_.end(), lex_less);
}

bool ConfocalFamily::near_singular(cplx z, double tol) const {
  for (cplx l : sing_)
    if (std::abs(z - l) <= tol * std::max(1.0, std::abs(l))) return true;
  return false;
}

Quadric ConfocalFamily::member(cplx z) const {
  if (z == 0.0) return base_;
  if (near_singular(z)) throw Error(Errc::SingularMember, "z is a singular parameter of the family");
  CMat3 m = (base_.inverse() - z * CMat3::Identity()).inverse();
  return Quadric(0.5 * (m + m.transpose()));
}

CMat3 ConfocalFamily::ivory_operator(cplx z) const { return CMat3::Identity() - z * base_.matrix(); }

CVec3 ConfocalFamily::ivory_map(cplx z, const CVec3& p, double tol) const {
  if (std::abs(base_.residual(p)) > tol * std::max(1.0, p.squaredNorm()))
    throw Error(Errc::InvalidArgument, "point is not on the base quadric");
  if (z == 0.0) return p;
  return sym_sqrt(ivory_operator(z)) * p;
}

RulingChart::RulingChart(const Quadric& q, const CMat3& frame) : q_(q), m_(frame) {
  if ((m_ * m_.transpose() - q.inverse()).norm() > 1e-9 * mscale(q.inverse()))
    throw Error(Errc::InvalidArgument, "frame does not factor the inverse quadric matrix");
  minv_ = m_.inverse();
}

RulingChart RulingChart::of(const Quadric& q, FrameKind kind) {
  if (kind == FrameKind::RealRulings) {
    auto f = real_ruling_frame(q.inverse());
    if (!f) throw Error(Errc::InvalidArgument, "quadric has no real rulings");
    return RulingChart(q, *f);
  }
  return RulingChart(q, sym_sqrt(q.inverse()));
}

CVec3 RulingChart::point(cplx u, cplx v) const {
  const cplx d = u - v;
  if (std::abs(d) <= 1e-12 * std::max({1.0, std::abs(u), std::abs(v)})) throw Error(Errc::ChartPole, "u = v");
  return m_ * ((-u * v * f1() + 2.0 * f1bar() + (u + v) * e3()) / d);
}

std::pair<cplx, cplx> RulingChart::locate(const CVec3& x) const { return sphere_chart_inverse(minv_ * x); }

std::optional<CMat3> real_ruling_frame(const CMat3& ainv, double tol) {
  if (ainv.imag().norm() > tol * mscale(ainv)) return std::nullopt;
  Eigen::Matrix3d d = ainv.real();
  d = 0.5 * (d + d.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(d);
  const auto& l = es.eigenvalues();
  if (!(l(0) < 0 && l(1) > 0 && l(2) > 0)) return std::nullopt;
  const auto& o = es.eigenvectors();
  Eigen::Matrix3d mr;
  mr.col(0) = std::sqrt(l(1)) * o.col(1);
  mr.col(1) = std::sqrt(-l(0)) * o.col(0);
  mr.col(2) = std::sqrt(l(2)) * o.col(2);
  CMat3 diag = CMat3::Identity();
  diag(1, 1) = -I1;
  return CMat3(mr.cast<cplx>() * diag);
}

ConfocalPair confocal_pair(const ConfocalFamily& fam, cplx z, const CMat3& aux_frame) {
  const Quadric aux = fam.member(z);
  const CMat3 iv = sym_sqrt(fam.ivory_operator(z));
  const CMat3 m0 = iv.inverse() * aux_frame;
  return ConfocalPair{z, RulingChart(aux, aux_frame), RulingChart(fam.base(), m0), iv};
}

ConfocalPair confocal_pair(const ConfocalFamily& fam, cplx z, FrameKind kind) {
  const Quadric aux = fam.member(z);
  std::optional<CMat3> f;
  if (kind == FrameKind::RealRulings) f = real_ruling_frame(aux.inverse());
  // falls back to the symmetric frame when the member has no real rulings
  if (!f) f = sym_sqrt(aux.inverse());
  return confocal_pair(fam, z, *f);
}

IsotropicRulings isotropic_rulings(const Quadric& q) {
  const std::array<CVec3, 3> c{2.0 * f1bar(), 2.0 * e3(), -f1()};
  IsotropicRulings out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.coefficients[i + j] += bdot(c[i], q.inverse() * c[j]);
  double cmax = 0;
  for (cplx k : out.coefficients) cmax = std::max(cmax, std::abs(k));
  const double scale = 4.0 * mscale(q.inverse());
  if (cmax <= 1e-12 * scale) {
    out.all_isotropic = true;
    return out;
  }
  int deg = 4;
  while (deg > 0 && std::abs(out.coefficients[deg]) <= 1e-12 * cmax) --deg;
  out.at_infinity = 4 - deg;
  if (deg == 0) return out;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -out.coefficients[i] / out.coefficients[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  auto poly = [&](cplx v) {
    cplx r = 0, d = 0;
    for (int k = deg; k >= 0; --k) {
      d = d * v + r;
      r = r * v + out.coefficients[k];
    }
    return std::pair<cplx, cplx>(r, d);
  };
  for (int i = 0; i < deg; ++i) {
    cplx r = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      auto [p, dp] = poly(r);
      if (std::abs(dp) < 1e-8 * cmax) break;  // multiple root, Newton would stall
      r -= p / dp;
    }
    out.roots.push_back(clean(r));
  }
  std::sort(out.roots.begin(), out.roots.end(), lex_less);
  for (cplx r : out.roots) {
    bool merged = false;
    for (size_t k = 0; k < out.distinct.size(); ++k) {
      if (std::abs(r - out.distinct[k]) <= 1e-6 * std::max(1.0, std::abs(r))) {
        out.distinct[k] = (out.distinct[k] * double(out.multiplicity[k]) + r) / double(out.multiplicity[k] + 1);
        ++out.multiplicity[k];
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.distinct.push_back(r);
      out.multiplicity.push_back(1);
    }
  }
  return out;
}

}  // namespace bq
