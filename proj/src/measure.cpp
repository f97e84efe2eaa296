#include "carnot/measure.hpp"

#include <cmath>

namespace carnot {

BoxDimensionReport box_dimension(const AlgebraPtr& alg, const std::vector<Eigen::VectorXd>& pts,
                                 const std::vector<double>& radii, const Norm& nrm) {
  if (radii.size() < 2) throw std::invalid_argument("box_dimension: need at least two radii");
  BoxDimensionReport rep;
  rep.radii = radii;
  for (double r : radii) rep.counts.push_back(cover_points(alg, pts, r, nrm).size());
  // slope of log N against log(1/r)
  const std::size_t k = radii.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(k), ys(k);
  for (std::size_t i = 0; i < k; ++i) {
    xs[i] = std::log(1.0 / radii[i]);
    ys[i] = std::log(static_cast<double>(std::max<std::size_t>(rep.counts[i], 1)));
    sx += xs[i];
    sy += ys[i];
  }
  sx /= static_cast<double>(k);
  sy /= static_cast<double>(k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    num += (xs[i] - sx) * (ys[i] - sy);
    den += (xs[i] - sx) * (xs[i] - sx);
  }
  rep.dimension = den > 0.0 ? num / den : 0.0;
  return rep;
}

ScalingReport haar_scaling_check(const AlgebraPtr& alg, const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi, double lambda) {
  if (lo.size() != alg->dim() || hi.size() != alg->dim())
    throw std::invalid_argument("haar_scaling_check: box dims must match the group dim");
  if (!(lambda > 0.0)) throw std::invalid_argument("haar_scaling_check: lambda must be positive");
  double vol = 1.0, dvol = 1.0;
  for (int j = 0; j < alg->dim(); ++j) {
    const double w = hi[j] - lo[j];
    if (!(w > 0.0)) throw std::invalid_argument("haar_scaling_check: empty box");
    const double scale = j < alg->m1() ? lambda : lambda * lambda;
    vol *= w;
    dvol *= scale * w;
  }
  return {dvol / vol, std::pow(lambda, alg->homogeneous_dim())};
}

namespace {

double glue(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return std::exp(-1.0 / (u * (1.0 - u)));
}

}  // namespace

std::function<double(const Eigen::VectorXd&)> bump_on_box(const Eigen::VectorXd& lo,
                                                          const Eigen::VectorXd& hi) {
  return [lo, hi](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (int j = 0; j < lo.size(); ++j) {
      v *= glue((x[j] - lo[j]) / (hi[j] - lo[j]));
      if (v == 0.0) return 0.0;
    }
    return v;
  };
}

FubiniReport coset_fubini(const HomogeneousSplit& split,
                          const std::function<double(const Eigen::VectorXd&)>& kappa,
                          const Eigen::VectorXd& glo, const Eigen::VectorXd& ghi, double mpad,
                          double hpad, double step, Exec exec) {
  const AlgebraPtr alg = split.algebra();
  const int n = alg->dim();
  if (glo.size() != n || ghi.size() != n)
    throw std::invalid_argument("coset_fubini: box dims must match the group dim");
  if (!(step > 0.0)) throw std::invalid_argument("coset_fubini: step must be positive");

  // group-side Riemann sum
  std::vector<int> gn(static_cast<std::size_t>(n));
  long long gtotal = 1;
  double gvol = 1.0;
  for (int j = 0; j < n; ++j) {
    gn[static_cast<std::size_t>(j)] =
        std::max(1, static_cast<int>(std::ceil((ghi[j] - glo[j]) / step)));
    gtotal *= gn[static_cast<std::size_t>(j)];
    gvol *= (ghi[j] - glo[j]) / gn[static_cast<std::size_t>(j)];
  }
  FubiniReport rep;
  rep.lhs = gvol * reduce_sum(
                       static_cast<std::size_t>(gtotal),
                       [&](std::size_t flat) {
                         Eigen::VectorXd x(n);
                         auto rem = static_cast<long long>(flat);
                         for (int j = n; j-- > 0;) {
                           const int nj = gn[static_cast<std::size_t>(j)];
                           const int ij = static_cast<int>(rem % nj);
                           rem /= nj;
                           x[j] = glo[j] + (ij + 0.5) * (ghi[j] - glo[j]) / nj;
                         }
                         return kappa(x);
                       },
                       exec);

  // iterated sum: outer H window, inner M window, both padded coordinate boxes
  const auto window = [&](const std::vector<int>& hdims, const std::vector<int>& vdims,
                          double pad, std::vector<double>& lo, std::vector<double>& wi,
                          std::vector<int>& cnt) {
    long long total = 1;
    double vol = 1.0;
    for (int which = 0; which < 2; ++which) {
      const auto& dims = which == 0 ? hdims : vdims;
      const int off = which == 0 ? 0 : alg->m1();
      for (int d : dims) {
        const double a = glo[off + d] - pad;
        const double b = ghi[off + d] + pad;
        const int nj = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
        lo.push_back(a);
        wi.push_back((b - a) / nj);
        cnt.push_back(nj);
        total *= nj;
        vol *= (b - a) / nj;
      }
    }
    return std::make_pair(total, vol);
  };

  std::vector<double> mlo, mw, hlo, hw;
  std::vector<int> mn, hn;
  const auto [mtotal, mvol] = window(split.m_horizontal(), split.m_vertical(), mpad, mlo, mw, mn);
  const auto [htotal, hvol] = window(split.h_horizontal(), split.h_vertical(), hpad, hlo, hw, hn);
  const int dm = static_cast<int>(mn.size());
  const int dh = static_cast<int>(hn.size());

  rep.rhs = mvol * hvol *
            reduce_sum(
                static_cast<std::size_t>(mtotal * htotal),
                [&](std::size_t flat) {
                  auto rem = static_cast<long long>(flat);
                  Eigen::VectorXd hc(dh), mc(dm);
                  for (int j = dh; j-- > 0;) {
                    const int ij = static_cast<int>(rem % hn[static_cast<std::size_t>(j)]);
                    rem /= hn[static_cast<std::size_t>(j)];
                    hc[j] = hlo[static_cast<std::size_t>(j)] +
                            (ij + 0.5) * hw[static_cast<std::size_t>(j)];
                  }
                  for (int j = dm; j-- > 0;) {
                    const int ij = static_cast<int>(rem % mn[static_cast<std::size_t>(j)]);
                    rem /= mn[static_cast<std::size_t>(j)];
                    mc[j] = mlo[static_cast<std::size_t>(j)] +
                            (ij + 0.5) * mw[static_cast<std::size_t>(j)];
                  }
                  return kappa(multiply(split.point_from_m(mc), split.point_from_h(hc)).c);
                },
                exec);
  rep.rel_err = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.lhs), 1e-300);
  return rep;
}

}  // namespace carnot
