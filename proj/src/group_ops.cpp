#include "carnot/group_ops.hpp"

#include <cmath>
#include <functional>

namespace carnot {

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) {
  require_same_algebra(a, b);
  const auto& alg = *a.alg;
  Eigen::VectorXd out(alg.dim());
  out.head(alg.m1()) = a.c.head(alg.m1()) + b.c.head(alg.m1());
  if (alg.m2() > 0) {
    out.tail(alg.m2()) = a.c.tail(alg.m2()) + b.c.tail(alg.m2()) +
                         0.5 * alg.bracket(a.c.head(alg.m1()), b.c.head(alg.m1()));
  }
  return GroupPoint(a.alg, std::move(out));
}

GroupPoint inverse(const GroupPoint& a) {
  // step-2: exp coordinates invert by negation ([x, x] = 0)
  return GroupPoint(a.alg, -a.c);
}

GroupPoint dilate(const GroupPoint& a, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  const auto& alg = *a.alg;
  Eigen::VectorXd out(alg.dim());
  out.head(alg.m1()) = lambda * a.c.head(alg.m1());
  out.tail(alg.m2()) = (lambda * lambda) * a.c.tail(alg.m2());
  return GroupPoint(a.alg, std::move(out));
}

std::string Norm::name() const {
  switch (kind) {
    case NormKind::MaxHomog:
      return "max-homog(" + std::to_string(eps1) + "," + std::to_string(eps2) + ")";
    case NormKind::CyganGauge:
      return "cygan";
  }
  return "?";
}

double norm_coords(const HTypeAlgebra& alg, const Eigen::VectorXd& coords, const Norm& nrm) {
  const int m1 = alg.m1();
  const int m2 = alg.m2();
  const double nx = coords.head(m1).norm();
  const double nt = m2 > 0 ? coords.tail(m2).norm() : 0.0;
  switch (nrm.kind) {
    case NormKind::MaxHomog:
      return std::max(nrm.eps1 * nx, nrm.eps2 * std::sqrt(nt));
    case NormKind::CyganGauge: {
      const double nx2 = nx * nx;
      return std::pow(nx2 * nx2 + 16.0 * nt * nt, 0.25);
    }
  }
  return 0.0;
}

double norm(const GroupPoint& a, const Norm& nrm) { return norm_coords(*a.alg, a.c, nrm); }

double distance(const GroupPoint& p, const GroupPoint& q, const Norm& nrm) {
  return norm(multiply(inverse(q), p), nrm);
}

double distance_coords(const HTypeAlgebra& alg, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, const Norm& nrm) {
  const int m1 = alg.m1();
  const int m2 = alg.m2();
  double nx2 = 0.0;
  for (int i = 0; i < m1; ++i) {
    const double d = a[i] - b[i];
    nx2 += d * d;
  }
  double nt2 = 0.0;
  for (int c = 0; c < m2; ++c) {
    // t-part of b^{-1} a: dt_c - <J_c x_b, x_a> / 2
    const double* jd = alg.j_matrix(c).data();  // column-major m1 x m1
    double tw = 0.0;
    for (int q = 0; q < m1; ++q) {
      const double bq = b[q];
      if (bq == 0.0) continue;
      const double* col = jd + static_cast<std::ptrdiff_t>(q) * m1;
      double s = 0.0;
      for (int r = 0; r < m1; ++r) s += col[r] * a[r];
      tw += bq * s;
    }
    const double d = a[m1 + c] - b[m1 + c] - 0.5 * tw;
    nt2 += d * d;
  }
  const double nx = std::sqrt(nx2);
  const double nt = std::sqrt(nt2);
  switch (nrm.kind) {
    case NormKind::MaxHomog:
      return std::max(nrm.eps1 * nx, nrm.eps2 * std::sqrt(nt));
    case NormKind::CyganGauge:
      return std::pow(nx2 * nx2 + 16.0 * nt2, 0.25);
  }
  return 0.0;
}

std::pair<double, double> norm_scales(const Norm& nrm) {
  if (nrm.kind == NormKind::CyganGauge) return {1.0, 2.0};
  return {nrm.eps1, nrm.eps2};
}

Eigen::MatrixXd frame(const GroupPoint& g) {
  const auto& alg = *g.alg;
  if (!alg.is_htype())
    throw std::domain_error("frame: no frame tables for generic step-2 algebras");
  const int m1 = alg.m1();
  const int m2 = alg.m2();
  const int n = alg.dim();
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd x = g.c.head(m1);
  for (int a = 0; a < m2; ++a) {
    const Eigen::VectorXd jx = alg.j_matrix(a) * x;
    for (int jcol = 0; jcol < m1; ++jcol) e(m1 + a, jcol) = 0.5 * jx[jcol];
  }
  return e;
}

Eigen::VectorXd frame_coefficients(const GroupPoint& g, const Eigen::VectorXd& v) {
  const auto& alg = *g.alg;
  if (!alg.is_htype())
    throw std::domain_error("frame_coefficients: no frame tables for generic step-2 algebras");
  if (v.size() != alg.dim()) throw std::invalid_argument("frame_coefficients: bad vector length");
  const int m1 = alg.m1();
  const int m2 = alg.m2();
  Eigen::VectorXd c = v;
  const Eigen::VectorXd x = g.c.head(m1);
  const Eigen::VectorXd vh = v.head(m1);
  for (int a = 0; a < m2; ++a) c[m1 + a] -= 0.5 * (alg.j_matrix(a) * x).dot(vh);
  return c;
}

HorizontalityReport is_horizontal(const AlgebraPtr& alg,
                                  const std::function<Eigen::VectorXd(double)>& curve, double t0,
                                  double t1, int samples, double tol) {
  if (samples < 3) throw std::invalid_argument("is_horizontal: need at least 3 samples");
  if (!(t1 > t0)) throw std::invalid_argument("is_horizontal: empty parameter interval");
  const double h = (t1 - t0) / (samples - 1);
  HorizontalityReport rep;
  double acc = 0.0;
  int count = 0;
  for (int i = 1; i + 1 < samples; ++i) {
    const double t = t0 + i * h;
    const Eigen::VectorXd v = (curve(t + h) - curve(t - h)) / (2.0 * h);
    const GroupPoint g(alg, curve(t));
    const Eigen::VectorXd c = frame_coefficients(g, v);
    const double defect = alg->m2() > 0 ? c.tail(alg->m2()).cwiseAbs().maxCoeff() : 0.0;
    rep.max_vertical_defect = std::max(rep.max_vertical_defect, defect);
    acc += defect;
    ++count;
  }
  rep.mean_vertical_defect = count > 0 ? acc / count : 0.0;
  rep.horizontal = rep.max_vertical_defect <= tol;
  return rep;
}

}  // namespace carnot
