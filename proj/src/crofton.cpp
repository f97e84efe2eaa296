#include "carnot/crofton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "carnot/witness.hpp"

namespace carnot {

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace {

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

using Integrand = std::function<double(const Eigen::VectorXd&)>;

// midpoint quadrature of f over {basis y : |y| <= radius}
double plane_integral(const Eigen::MatrixXd& basis, const Integrand& f, double radius,
                      double step) {
  const int k = static_cast<int>(basis.cols());
  const long long per = std::max<long long>(1, std::llround(2.0 * radius / step));
  long long total = 1;
  for (int d = 0; d < k; ++d) {
    total *= per;
    if (total > 200000000ll) throw std::invalid_argument("plane_integral: grid too large");
  }
  double sum = 0.0;
  Eigen::VectorXd y(k);
  for (long long flat = 0; flat < total; ++flat) {
    long long rest = flat;
    for (int d = k - 1; d >= 0; --d) {
      const long long i = rest % per;
      rest /= per;
      y[d] = -radius + (static_cast<double>(i) + 0.5) * (2.0 * radius / per);
    }
    if (y.squaredNorm() > radius * radius) continue;
    sum += f(basis * y);
  }
  return sum * std::pow(2.0 * radius / per, k);
}

// integral of |x|^(k-n) f(x) over [-radius, radius]^n with an odd midpoint
// grid; the singular center cell is replaced by an exact polar patch over the
// ball of equal volume (integrates the weight against f(0)).
double weighted_ambient(int n, int k, const Integrand& f, double radius, int cells, Exec exec) {
  if (cells < 3) throw std::invalid_argument("weighted_ambient: need >= 3 cells per dim");
  if (cells % 2 == 0) ++cells;
  const double h = 2.0 * radius / cells;
  const double hn = std::pow(h, n);
  const double r_patch = h / std::pow(unit_ball_volume(n), 1.0 / n);
  const double patch = f(Eigen::VectorXd::Zero(n)) * sphere_area(n) * std::pow(r_patch, k) / k;
  const int mid = cells / 2;
  long long total = 1;
  for (int d = 0; d < n; ++d) total *= cells;
  const double expo = static_cast<double>(k - n);
  double sum = reduce_sum(
      static_cast<std::size_t>(total),
      [&](std::size_t flat) {
        long long rest = static_cast<long long>(flat);
        Eigen::VectorXd x(n);
        bool center = true;
        for (int d = n - 1; d >= 0; --d) {
          const int i = static_cast<int>(rest % cells);
          rest /= cells;
          if (i != mid) center = false;
          x[d] = -radius + (i + 0.5) * h;
        }
        if (center) return patch;
        return std::pow(x.norm(), expo) * f(x) * hn;
      },
      exec);
  return sum;
}

struct McStats {
  double mean = 0.0, se = 0.0;
  int batches = 0;
};

McStats batch_stats(const std::vector<double>& vals, Exec exec) {
  McStats st;
  const int n = static_cast<int>(vals.size());
  st.batches = std::min(20, n);
  st.mean = reduce_sum(vals.size(), [&](std::size_t i) { return vals[i]; }, exec) / n;
  if (st.batches < 2) return st;
  double var = 0.0;
  for (int b = 0; b < st.batches; ++b) {
    const int lo = static_cast<int>(static_cast<long long>(b) * n / st.batches);
    const int hi = static_cast<int>(static_cast<long long>(b + 1) * n / st.batches);
    double m = 0.0;
    for (int i = lo; i < hi; ++i) m += vals[static_cast<std::size_t>(i)];
    m /= (hi - lo);
    var += (m - st.mean) * (m - st.mean);
  }
  var /= (st.batches - 1);
  st.se = std::sqrt(var / st.batches);
  return st;
}

CroftonReport assemble(const std::vector<double>& vals, double ambient, double expected,
                       Exec exec) {
  CroftonReport rep;
  const McStats st = batch_stats(vals, exec);
  rep.mc_mean = st.mean;
  rep.mc_se = st.se;
  rep.batches = st.batches;
  rep.samples = static_cast<int>(vals.size());
  rep.ambient = ambient;
  if (ambient != 0.0) {
    rep.ratio = st.mean / ambient;
    rep.ratio_se = st.se / std::abs(ambient);
  }
  rep.expected = expected;
  return rep;
}

}  // namespace

CroftonReport euclidean_crofton(int n, int k, const Integrand& f, double radius, int samples,
                                std::uint64_t seed, double plane_step, int ambient_cells,
                                Exec exec) {
  if (n < 2 || k < 1 || k >= n) throw std::invalid_argument("euclidean_crofton: need 1 <= k < n");
  if (samples < 20) throw std::invalid_argument("euclidean_crofton: need >= 20 samples");
  if (!(radius > 0.0) || !(plane_step > 0.0))
    throw std::invalid_argument("euclidean_crofton: radius and plane_step must be positive");
  const Rng base(seed);
  std::vector<double> vals(static_cast<std::size_t>(samples), 0.0);
  parallel_for(
      vals.size(),
      [&](std::size_t i) {
        Rng r = base.child(i);
        const Eigen::MatrixXd rot = haar_orthogonal(n, r);
        vals[i] = plane_integral(rot.leftCols(k), f, radius, plane_step);
      },
      exec);
  const double ambient = weighted_ambient(n, k, f, radius, ambient_cells, exec);
  return assemble(vals, ambient, sphere_area(k) / sphere_area(n), exec);
}

CroftonReport htype_crofton_horizontal(const AlgebraPtr& alg, int k, const Integrand& f,
                                       double radius, int samples, std::uint64_t seed,
                                       double plane_step, int ambient_cells, Exec exec) {
  if (!alg || !alg->is_htype())
    throw std::invalid_argument("htype_crofton_horizontal: need an H-type algebra");
  const int m1 = alg->m1();
  if (k < 1 || k >= m1)
    throw std::invalid_argument("htype_crofton_horizontal: need 1 <= k < m1");
  if (samples < 20) throw std::invalid_argument("htype_crofton_horizontal: need >= 20 samples");
  const Subalgebra ref = reference_subalgebra(alg, k, 0);
  const Rng base(seed);
  std::vector<double> vals(static_cast<std::size_t>(samples), 0.0);
  parallel_for(
      vals.size(),
      [&](std::size_t i) {
        Rng r = base.child(i);
        const Isometry iso = sample_isometry(alg, r, true);
        vals[i] = plane_integral(iso.u * ref.basis_h, f, radius, plane_step);
      },
      exec);
  const double ambient = weighted_ambient(m1, k, f, radius, ambient_cells, exec);
  return assemble(vals, ambient, sphere_area(k) / sphere_area(m1), exec);
}

CroftonReport htype_crofton_vertical(const AlgebraPtr& alg, int k_h, int k_v, const Integrand& f_h,
                                     const Integrand& f_v, double radius, int samples,
                                     std::uint64_t seed, double step, int ambient_cells,
                                     Exec exec) {
  if (!alg || !alg->is_htype())
    throw std::invalid_argument("htype_crofton_vertical: need an H-type algebra");
  const int m1 = alg->m1();
  const int m2 = alg->m2();
  if (k_h < 1 || k_h > m1 || k_v < 1 || k_v > m2)
    throw std::invalid_argument("htype_crofton_vertical: bad signature");
  if (samples < 20) throw std::invalid_argument("htype_crofton_vertical: need >= 20 samples");
  const Subalgebra ref = reference_subalgebra(alg, k_h, k_v);
  const Rng base(seed);
  std::vector<double> vals(static_cast<std::size_t>(samples), 0.0);
  parallel_for(
      vals.size(),
      [&](std::size_t i) {
        Rng r = base.child(i);
        const Isometry iso = sample_isometry(alg, r, true);
        const double a = plane_integral(iso.u * ref.basis_h, f_h, radius, step);
        const double b = plane_integral(iso.v * ref.basis_v, f_v, radius, step);
        vals[i] = a * b;
      },
      exec);
  const double amb_h = weighted_ambient(m1, k_h, f_h, radius, ambient_cells, exec);
  const double amb_v = weighted_ambient(m2, k_v, f_v, radius, ambient_cells, exec);
  const double expected =
      (sphere_area(k_h) / sphere_area(m1)) * (sphere_area(k_v) / sphere_area(m2));
  return assemble(vals, amb_h * amb_v, expected, exec);
}

namespace {

// discrete modulus rows for subgroup patches (mixed horizontal/vertical
// signature) over the unit cube in exponential coordinates; mirrors the
// plane-family builder with a product-of-balls sample window
ModulusProblem subgroup_family_problem(const AlgebraPtr& alg,
                                       const std::vector<Subalgebra>& subs, int cells_per_dim,
                                       double p) {
  const int ndim = alg->dim();
  if (ndim > 6) throw std::invalid_argument("subgroup_family: ambient dim > 6");
  if (cells_per_dim < 2) throw std::invalid_argument("subgroup_family: need >= 2 cells/dim");
  ModulusProblem prob;
  prob.p = p;
  const double h = 2.0 / cells_per_dim;
  long long ncells = 1;
  for (int d = 0; d < ndim; ++d) ncells *= cells_per_dim;
  prob.mass.assign(static_cast<std::size_t>(ncells), std::pow(h, ndim));

  const double sh = h / 3.0;
  const int half = static_cast<int>(std::ceil(1.0 / sh));
  for (const auto& sub : subs) {
    const int kh = sub.k_h();
    const int kv = sub.k_v();
    const int q = kh + kv;
    std::unordered_map<long long, double> bins;
    std::vector<int> idx(static_cast<std::size_t>(q), -half);
    while (true) {
      Eigen::VectorXd y(kh), s(kv);
      for (int d = 0; d < kh; ++d) y[d] = (idx[static_cast<std::size_t>(d)] + 0.5) * sh;
      for (int d = 0; d < kv; ++d) s[d] = (idx[static_cast<std::size_t>(kh + d)] + 0.5) * sh;
      if (y.norm() <= 1.0 && s.norm() <= 1.0) {
        Eigen::VectorXd c(ndim);
        c.head(alg->m1()) = sub.basis_h * y;
        c.tail(alg->m2()) = sub.basis_v * s;
        long long flat = 0;
        bool in = true;
        for (int d = 0; d < ndim; ++d) {
          const int cell = static_cast<int>(std::floor((c[d] + 1.0) / h));
          if (cell < 0 || cell >= cells_per_dim) {
            in = false;
            break;
          }
          flat = flat * cells_per_dim + cell;
        }
        if (in) bins[flat] += std::pow(sh, q);
      }
      int d = q;
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

}  // namespace

CorollaryReport corollary_experiment(const CorollaryConfig& cfg, Exec exec) {
  const std::size_t levels = cfg.resolutions.size();
  if (levels < 2 || cfg.plane_counts.size() != levels)
    throw std::invalid_argument("corollary: need >= 2 levels with matching plane counts");
  const int max_planes = *std::max_element(cfg.plane_counts.begin(), cfg.plane_counts.end());
  if (max_planes < 1) throw std::invalid_argument("corollary: need at least one plane");

  CorollaryReport rep;
  Rng rng(cfg.seed);

  // nested sample of subspaces: level l uses the first plane_counts[l]
  std::vector<Eigen::MatrixXd> planes;
  std::vector<Subalgebra> subs;
  int ambient_dim = 0;
  if (cfg.shape == ShapeKind::Euclidean) {
    if (cfg.n < 2 || cfg.k < 1 || cfg.k >= cfg.n)
      throw std::invalid_argument("corollary: need 1 <= k < n");
    ambient_dim = cfg.n;
    for (int i = 0; i < max_planes; ++i)
      planes.push_back(haar_orthogonal(cfg.n, rng).leftCols(cfg.k));
    rep.holder_finite = cfg.p * cfg.k > static_cast<double>(cfg.n);
  } else if (cfg.shape == ShapeKind::Horizontal) {
    if (!cfg.alg) throw std::invalid_argument("corollary: horizontal shape needs an algebra");
    ambient_dim = cfg.alg->m1();
    const Subalgebra ref = reference_subalgebra(cfg.alg, cfg.k, 0);
    for (int i = 0; i < max_planes; ++i) {
      const Isometry iso = sample_isometry(cfg.alg, rng, true);
      planes.push_back(iso.u * ref.basis_h);
    }
    rep.holder_finite = cfg.p * cfg.k > static_cast<double>(cfg.alg->m1());
  } else {
    if (!cfg.alg) throw std::invalid_argument("corollary: vertical shape needs an algebra");
    ambient_dim = cfg.alg->dim();
    const Subalgebra ref = reference_subalgebra(cfg.alg, cfg.k_h, cfg.k_v);
    for (int i = 0; i < max_planes; ++i)
      subs.push_back(transform(sample_isometry(cfg.alg, rng, true), ref));
    rep.holder_finite = cfg.p * cfg.k_h > static_cast<double>(cfg.alg->m1()) &&
                        cfg.p * cfg.k_v > static_cast<double>(cfg.alg->m2());
  }

  for (std::size_t l = 0; l < levels; ++l) {
    const int count = cfg.plane_counts[l];
    ModulusProblem prob;
    if (cfg.shape == ShapeKind::Vertical) {
      std::vector<Subalgebra> part(subs.begin(), subs.begin() + count);
      prob = subgroup_family_problem(cfg.alg, part, cfg.resolutions[l], cfg.p);
    } else {
      std::vector<Eigen::MatrixXd> part(planes.begin(), planes.begin() + count);
      prob = plane_family_problem(ambient_dim, cfg.k, cfg.resolutions[l], part, cfg.p);
    }
    const ModulusSolution sol = solve_modulus(prob, cfg.tol, cfg.max_sweeps, exec);
    rep.values.push_back(sol.infinite ? std::numeric_limits<double>::infinity() : sol.value);
    rep.converged.push_back(sol.converged);
    rep.kkt.push_back(sol.kkt_residual);
  }

  bool decreasing = true;
  for (std::size_t l = 0; l + 1 < levels; ++l)
    if (!(rep.values[l + 1] <= cfg.decay_ratio * rep.values[l])) decreasing = false;
  if (!(rep.values.back() <= cfg.total_decay * rep.values.front())) decreasing = false;
  const double mx = *std::max_element(rep.values.begin(), rep.values.end());
  const double mn = *std::min_element(rep.values.begin(), rep.values.end());
  const bool bounded = std::isfinite(mx) && mx > 0.0 && (mx - mn) / mx <= cfg.variation;
  rep.trend = decreasing ? "decreasing" : (bounded ? "bounded" : "mixed");
  rep.consistent = rep.holder_finite ? (rep.trend == "bounded") : (rep.trend == "decreasing");
  return rep;
}

}  // namespace carnot
