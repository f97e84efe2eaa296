#include "carnot/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace carnot {
namespace {

// two-sided smooth glue: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

std::uint64_t lattice_key(const long long* z, int d) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < d; ++i) {
    h ^= static_cast<std::uint64_t>(z[i]) * 0xff51afd7ed558ccdULL;
    h ^= h >> 31;
    h *= 0xc4ceb9fe1a85ec53ULL;
  }
  return h;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t k = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

WitnessFunction WitnessFunction::radial_pow(AlgebraPtr alg, double dm, Norm nrm) {
  if (!(dm > 0.0)) throw std::invalid_argument("radial_pow: exponent must be positive");
  WitnessFunction w;
  w.kind_ = WitnessKind::RadialPow;
  w.alg_ = std::move(alg);
  w.nrm_ = nrm;
  w.dm_ = dm;
  return w;
}

WitnessFunction WitnessFunction::radial_log(AlgebraPtr alg, double dm, double alpha, Norm nrm) {
  if (!(dm > 0.0)) throw std::invalid_argument("radial_log: exponent must be positive");
  WitnessFunction w;
  w.kind_ = WitnessKind::RadialLog;
  w.alg_ = std::move(alg);
  w.nrm_ = nrm;
  w.dm_ = dm;
  w.alpha_ = alpha;
  return w;
}

WitnessFunction WitnessFunction::vitali_phi(int dim, double r, const Eigen::VectorXd& lo,
                                            const Eigen::VectorXd& hi) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("vitali_phi: dim must be in [1, 4]");
  if (!(r > 0.0)) throw std::invalid_argument("vitali_phi: radius must be positive");
  if (lo.size() != dim || hi.size() != dim)
    throw std::invalid_argument("vitali_phi: box dims mismatch");
  WitnessFunction w;
  w.kind_ = WitnessKind::VitaliPhi;
  w.dim_ = dim;
  w.r_ = r;
  w.spacing_ = 2.0 * r / std::sqrt(static_cast<double>(dim));

  std::vector<long long> zlo(static_cast<std::size_t>(dim)), zhi(static_cast<std::size_t>(dim)),
      z(static_cast<std::size_t>(dim));
  long long total = 1;
  for (int d = 0; d < dim; ++d) {
    zlo[static_cast<std::size_t>(d)] =
        static_cast<long long>(std::ceil((lo[d] - 3.0 * r) / w.spacing_));
    zhi[static_cast<std::size_t>(d)] =
        static_cast<long long>(std::floor((hi[d] + 3.0 * r) / w.spacing_));
    if (zhi[static_cast<std::size_t>(d)] < zlo[static_cast<std::size_t>(d)])
      throw std::invalid_argument("vitali_phi: empty box");
    total *= zhi[static_cast<std::size_t>(d)] - zlo[static_cast<std::size_t>(d)] + 1;
    if (total > 2000000) throw std::invalid_argument("vitali_phi: too many lattice centers");
  }
  z = zlo;
  std::vector<std::pair<Eigen::VectorXd, std::vector<long long>>> raw;
  raw.reserve(static_cast<std::size_t>(total));
  for (long long c = 0; c < total; ++c) {
    Eigen::VectorXd x(dim);
    for (int d = 0; d < dim; ++d) x[d] = w.spacing_ * static_cast<double>(z[static_cast<std::size_t>(d)]);
    raw.push_back({x, z});
    for (int d = dim; d-- > 0;) {
      if (++z[static_cast<std::size_t>(d)] <= zhi[static_cast<std::size_t>(d)]) break;
      z[static_cast<std::size_t>(d)] = zlo[static_cast<std::size_t>(d)];
    }
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    const double na = a.first.norm(), nb = b.first.norm();
    if (na != nb) return na < nb;
    return a.second < b.second;
  });
  for (std::size_t i = 0; i < raw.size(); ++i) {
    w.centers_.push_back(raw[i].first);
    w.center_weight_.push_back(std::pow(2.0, -static_cast<double>(i + 1)));
    w.lattice_[lattice_key(raw[i].second.data(), dim)] = static_cast<int>(i);
  }
  return w;
}

WitnessFunction WitnessFunction::split_composite(
    std::vector<std::pair<HomogeneousSplit, WitnessFunction>> parts) {
  if (parts.empty()) throw std::invalid_argument("split_composite: no parts");
  WitnessFunction w;
  w.kind_ = WitnessKind::SplitComposite;
  for (auto& [split, part] : parts) {
    if (part.space_dim() != split.dim_m())
      throw std::invalid_argument("split_composite: part dimension must match dim M");
    w.splits_.push_back(split);
    w.parts_.push_back(std::make_shared<const WitnessFunction>(std::move(part)));
  }
  w.alg_ = w.splits_.front().algebra();
  return w;
}

int WitnessFunction::space_dim() const {
  switch (kind_) {
    case WitnessKind::RadialPow:
    case WitnessKind::RadialLog:
    case WitnessKind::SplitComposite:
      return alg_->dim();
    case WitnessKind::VitaliPhi:
      return dim_;
  }
  return 0;
}

double WitnessFunction::eval(const Eigen::VectorXd& z) const {
  switch (kind_) {
    case WitnessKind::RadialPow: {
      const double n = norm_coords(*alg_, z, nrm_);
      if (n >= 1.0) return 0.0;
      if (n == 0.0) return std::numeric_limits<double>::infinity();
      return std::pow(n, -dm_);
    }
    case WitnessKind::RadialLog: {
      const double n = norm_coords(*alg_, z, nrm_);
      if (n >= 1.0) return 0.0;
      if (n == 0.0) return std::numeric_limits<double>::infinity();
      return std::pow(n, -dm_) * std::pow(std::log(2.0 / n), -alpha_);
    }
    case WitnessKind::VitaliPhi: {
      // only lattice cells within 3r can contribute
      const auto reach = static_cast<long long>(std::floor(3.0 * r_ / spacing_)) + 1;
      std::vector<long long> base(static_cast<std::size_t>(dim_)),
          cur(static_cast<std::size_t>(dim_)), off(static_cast<std::size_t>(dim_), -reach);
      for (int d = 0; d < dim_; ++d)
        base[static_cast<std::size_t>(d)] = static_cast<long long>(std::llround(z[d] / spacing_));
      double acc = 0.0;
      while (true) {
        for (int d = 0; d < dim_; ++d)
          cur[static_cast<std::size_t>(d)] =
              base[static_cast<std::size_t>(d)] + off[static_cast<std::size_t>(d)];
        const auto it = lattice_.find(lattice_key(cur.data(), dim_));
        if (it != lattice_.end()) {
          const Eigen::VectorXd y = centers_[static_cast<std::size_t>(it->second)] - z;
          const double d = y.norm();
          if (d < 3.0 * r_) {
            if (d == 0.0) return std::numeric_limits<double>::infinity();
            acc += center_weight_[static_cast<std::size_t>(it->second)] *
                   smooth_step((3.0 * r_ - d) / r_) / d;
          }
        }
        int d = dim_;
        while (d-- > 0) {
          if (++off[static_cast<std::size_t>(d)] <= reach) break;
          off[static_cast<std::size_t>(d)] = -reach;
        }
        if (d < 0) break;
      }
      return acc;
    }
    case WitnessKind::SplitComposite: {
      const GroupPoint g(alg_, z);
      double acc = 0.0;
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto mh = decompose(g, splits_[i]);
        acc += parts_[i]->eval(splits_[i].m_coords(mh.first));
      }
      return acc;
    }
  }
  return 0.0;
}

double WitnessFunction::singular_distance(const Eigen::VectorXd& z) const {
  switch (kind_) {
    case WitnessKind::RadialPow:
    case WitnessKind::RadialLog:
      return norm_coords(*alg_, z, nrm_);
    case WitnessKind::VitaliPhi: {
      const auto reach = static_cast<long long>(std::floor(3.0 * r_ / spacing_)) + 1;
      std::vector<long long> base(static_cast<std::size_t>(dim_)),
          cur(static_cast<std::size_t>(dim_)), off(static_cast<std::size_t>(dim_), -reach);
      for (int d = 0; d < dim_; ++d)
        base[static_cast<std::size_t>(d)] = static_cast<long long>(std::llround(z[d] / spacing_));
      double best = std::numeric_limits<double>::infinity();
      while (true) {
        for (int d = 0; d < dim_; ++d)
          cur[static_cast<std::size_t>(d)] =
              base[static_cast<std::size_t>(d)] + off[static_cast<std::size_t>(d)];
        const auto it = lattice_.find(lattice_key(cur.data(), dim_));
        if (it != lattice_.end())
          best = std::min(best, (centers_[static_cast<std::size_t>(it->second)] - z).norm());
        int d = dim_;
        while (d-- > 0) {
          if (++off[static_cast<std::size_t>(d)] <= reach) break;
          off[static_cast<std::size_t>(d)] = -reach;
        }
        if (d < 0) break;
      }
      return best;
    }
    case WitnessKind::SplitComposite: {
      const GroupPoint g(alg_, z);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto mh = decompose(g, splits_[i]);
        best = std::min(best, parts_[i]->singular_distance(splits_[i].m_coords(mh.first)));
      }
      return best;
    }
  }
  return std::numeric_limits<double>::infinity();
}

LpReport lp_norm_estimate(const WitnessFunction& w, double p, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, double base_step, double base_core,
                          int levels, Exec exec) {
  if (levels < 2) throw std::invalid_argument("lp_norm_estimate: need at least 2 levels");
  const int nd = w.space_dim();
  if (lo.size() != nd || hi.size() != nd)
    throw std::invalid_argument("lp_norm_estimate: box dims mismatch");
  LpReport rep;
  std::vector<double> xs;
  for (int lvl = 0; lvl < levels; ++lvl) {
    const double step = base_step / std::pow(2.0, lvl);
    const double core = base_core / std::pow(2.0, lvl);
    std::vector<int> n(static_cast<std::size_t>(nd));
    long long total = 1;
    double vol = 1.0;
    for (int d = 0; d < nd; ++d) {
      n[static_cast<std::size_t>(d)] =
          std::max(1, static_cast<int>(std::ceil((hi[d] - lo[d]) / step)));
      total *= n[static_cast<std::size_t>(d)];
      vol *= (hi[d] - lo[d]) / n[static_cast<std::size_t>(d)];
    }
    const double val =
        vol * reduce_sum(
                  static_cast<std::size_t>(total),
                  [&](std::size_t flat) {
                    Eigen::VectorXd x(nd);
                    auto rem = static_cast<long long>(flat);
                    for (int d = nd; d-- > 0;) {
                      const int ndm = n[static_cast<std::size_t>(d)];
                      x[d] = lo[d] + (static_cast<double>(rem % ndm) + 0.5) *
                                         (hi[d] - lo[d]) / ndm;
                      rem /= ndm;
                    }
                    if (w.singular_distance(x) <= core) return 0.0;
                    const double v = w.eval(x);
                    return v > 0.0 ? std::pow(v, p) : 0.0;
                  },
                  exec);
    rep.values.push_back(val);
    xs.push_back(std::log(1.0 / core));
    if (lvl > 0)
      rep.rel_changes.push_back(std::abs(val - rep.values[static_cast<std::size_t>(lvl) - 1]) /
                                std::max(std::abs(val), 1e-300));
  }
  std::vector<double> ys;
  for (double v : rep.values) ys.push_back(std::log(std::max(v, 1e-300)));
  rep.slope = fit_slope(xs, ys);
  rep.converging = rep.slope <= 0.1;
  return rep;
}

SurfaceReport surface_divergence_check(const IntrinsicGraph& graph, const WitnessFunction& w,
                                       int j_lo, int j_hi, int divisor, const Norm& nrm) {
  if (j_hi < j_lo) throw std::invalid_argument("surface_divergence_check: empty ring range");
  if (divisor < 2) throw std::invalid_argument("surface_divergence_check: divisor must be >= 2");
  SurfaceReport rep;
  std::vector<double> xs, ys;
  const int dmet = graph.split.metric_dim_m();
  for (int j = j_lo; j <= j_hi; ++j) {
    const double rhi = std::pow(2.0, -j);
    const double delta = rhi / divisor;
    const auto centers = annulus_cover_centers(graph, 0.5 * rhi, rhi, delta, nrm);
    double s = 0.0;
    for (const auto& c : centers) {
      const double v = w.eval(c);
      if (std::isfinite(v)) s += v;
    }
    s *= std::pow(2.0 * delta, dmet);
    rep.ring_sums.push_back(s);
    xs.push_back(std::log(static_cast<double>(j + 2)));
    ys.push_back(std::log(std::max(s, 1e-300)));
  }
  rep.beta = -fit_slope(xs, ys);
  double mn = rep.ring_sums[0], mx = rep.ring_sums[0];
  for (double s : rep.ring_sums) {
    mn = std::min(mn, s);
    mx = std::max(mx, s);
  }
  rep.max_min_ratio = mn > 0.0 ? mx / mn : std::numeric_limits<double>::infinity();
  rep.diverging = rep.beta < 1.0 && mn > 0.0;
  rep.confident = std::abs(rep.beta - 1.0) >= 0.1;
  return rep;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Exceptional:
      return "exceptional";
    case Verdict::NonExceptional:
      return "non-exceptional";
    case Verdict::Infinite:
      return "infinite";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

RefinementReport fuglede_refinement_study(const std::vector<ModulusProblem>& ladder,
                                          double decay_ratio, double variation, double tol,
                                          int max_sweeps, Exec exec) {
  if (ladder.size() < 2)
    throw std::invalid_argument("fuglede_refinement_study: need at least 2 levels");
  RefinementReport rep;
  for (const auto& prob : ladder) {
    const ModulusSolution sol = solve_modulus(prob, tol, max_sweeps, exec);
    rep.values.push_back(sol.value);
    rep.infinite.push_back(sol.infinite);
    rep.converged.push_back(sol.converged);
    rep.kkt.push_back(sol.kkt_residual);
  }
  const bool any_inf = std::any_of(rep.infinite.begin(), rep.infinite.end(), [](bool b) { return b; });
  const bool all_inf = std::all_of(rep.infinite.begin(), rep.infinite.end(), [](bool b) { return b; });
  if (all_inf) {
    rep.verdict = Verdict::Infinite;
    return rep;
  }
  if (any_inf) return rep;  // inconclusive
  bool decaying = true;
  for (std::size_t i = 1; i < rep.values.size(); ++i)
    decaying = decaying && rep.values[i] <= decay_ratio * rep.values[i - 1];
  double mn = rep.values[0], mx = rep.values[0];
  for (double v : rep.values) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  if (decaying)
    rep.verdict = Verdict::Exceptional;
  else if (mx > 0.0 && (mx - mn) / mx <= variation)
    rep.verdict = Verdict::NonExceptional;
  return rep;
}

ModulusProblem annulus_radial_problem(int shells, int sectors, double p) {
  if (shells < 1 || sectors < 1) throw std::invalid_argument("annulus: bad grid");
  ModulusProblem prob;
  prob.p = p;
  const double dr = 1.0 / shells;
  const double dth = 2.0 * std::numbers::pi / sectors;
  prob.mass.resize(static_cast<std::size_t>(shells) * static_cast<std::size_t>(sectors));
  for (int i = 0; i < shells; ++i) {
    const double r0 = 1.0 + i * dr, r1 = 1.0 + (i + 1) * dr;
    const double m = dth * (r1 * r1 - r0 * r0) / 2.0;
    for (int t = 0; t < sectors; ++t)
      prob.mass[static_cast<std::size_t>(i) * sectors + t] = m;
  }
  for (int t = 0; t < sectors; ++t) {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < shells; ++i) row.push_back({i * sectors + t, dr});
    prob.rows.push_back(std::move(row));
  }
  return prob;
}

ModulusProblem disk_diameter_problem(int shells, int sectors, double eps, double p) {
  if (shells < 1 || sectors < 2 || sectors % 2 != 0)
    throw std::invalid_argument("disk: sectors must be even, shells >= 1");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("disk: eps in (0, 1)");
  ModulusProblem prob;
  prob.p = p;
  // log-spaced shell radii eps = r_0 < ... < r_shells = 1
  std::vector<double> r(static_cast<std::size_t>(shells) + 1);
  for (int i = 0; i <= shells; ++i)
    r[static_cast<std::size_t>(i)] = std::pow(eps, 1.0 - static_cast<double>(i) / shells);
  const double dth = 2.0 * std::numbers::pi / sectors;
  prob.mass.resize(static_cast<std::size_t>(shells) * static_cast<std::size_t>(sectors));
  for (int i = 0; i < shells; ++i) {
    const double m = dth * (r[static_cast<std::size_t>(i) + 1] * r[static_cast<std::size_t>(i) + 1] -
                            r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)]) /
                     2.0;
    for (int t = 0; t < sectors; ++t)
      prob.mass[static_cast<std::size_t>(i) * sectors + t] = m;
  }
  for (int t = 0; t < sectors / 2; ++t) {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < shells; ++i) {
      const double dri = r[static_cast<std::size_t>(i) + 1] - r[static_cast<std::size_t>(i)];
      row.push_back({i * sectors + t, dri});
      row.push_back({i * sectors + t + sectors / 2, dri});
    }
    prob.rows.push_back(std::move(row));
  }
  return prob;
}

ModulusProblem plane_family_problem(int n, int k, int cells_per_dim,
                                    const std::vector<Eigen::MatrixXd>& planes, double p) {
  if (n < 1 || n > 6 || k < 1 || k > n) throw std::invalid_argument("plane_family: bad (n, k)");
  if (cells_per_dim < 2) throw std::invalid_argument("plane_family: need at least 2 cells/dim");
  ModulusProblem prob;
  prob.p = p;
  const double h = 2.0 / cells_per_dim;
  long long ncells = 1;
  for (int d = 0; d < n; ++d) ncells *= cells_per_dim;
  prob.mass.assign(static_cast<std::size_t>(ncells), std::pow(h, n));

  const double sh = h / 3.0;  // plane sampling step
  const int half = static_cast<int>(std::ceil(1.0 / sh));
  for (const auto& b : planes) {
    if (b.rows() != n || b.cols() != k)
      throw std::invalid_argument("plane_family: basis must be n x k");
    std::unordered_map<long long, double> bins;
    std::vector<int> idx(static_cast<std::size_t>(k), -half);
    while (true) {
      Eigen::VectorXd y(k);
      for (int d = 0; d < k; ++d)
        y[d] = (idx[static_cast<std::size_t>(d)] + 0.5) * sh;
      if (y.norm() <= 1.0) {
        const Eigen::VectorXd x = b * y;
        long long flat = 0;
        bool in = true;
        for (int d = 0; d < n; ++d) {
          int c = static_cast<int>(std::floor((x[d] + 1.0) / h));
          if (c < 0 || c >= cells_per_dim) {
            in = false;
            break;
          }
          flat = flat * cells_per_dim + c;
        }
        if (in) bins[flat] += std::pow(sh, k);
      }
      int d = k;
      while (d-- > 0) {
        if (++idx[static_cast<std::size_t>(d)] < half) break;
        idx[static_cast<std::size_t>(d)] = -half;
      }
      if (d < 0) break;
    }
    std::vector<std::pair<int, double>> row;
    row.reserve(bins.size());
    for (const auto& [flat, wsum] : bins) row.push_back({static_cast<int>(flat), wsum});
    std::sort(row.begin(), row.end());
    prob.rows.push_back(std::move(row));
  }
  return prob;
}

}  // namespace carnot
