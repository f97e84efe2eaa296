#include "carnot/graph_measure.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace carnot {
namespace {

// Spatial hash over integer cells sized so that any two points within d_rho
// distance delta land in adjacent cells: horizontal reach of a delta-ball is
// delta/a1 per coordinate, vertical reach delta^2/a2^2 plus the BCH twist
// bounded by |x| * (horizontal reach) / 2.
struct CellHash {
  double sx = 1.0, st = 1.0;
  int m1 = 0, m2 = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

  static std::uint64_t mix(std::uint64_t h, long long v) {
    h ^= static_cast<std::uint64_t>(v) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return h;
  }

  void cell_of(const Eigen::VectorXd& p, long long* c) const {
    for (int i = 0; i < m1; ++i) c[i] = static_cast<long long>(std::floor(p[i] / sx));
    for (int a = 0; a < m2; ++a)
      c[m1 + a] = static_cast<long long>(std::floor(p[m1 + a] / st));
  }

  static std::uint64_t key_of(const long long* c, int nd) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (int d = 0; d < nd; ++d) h = mix(h, c[d]);
    return h;
  }
};

}  // namespace

std::vector<std::size_t> cover_points(const AlgebraPtr& alg,
                                      const std::vector<Eigen::VectorXd>& pts, double delta,
                                      const Norm& nrm) {
  if (!(delta > 0.0)) throw std::invalid_argument("cover_points: delta must be positive");
  const int m1 = alg->m1();
  const int m2 = alg->m2();
  const int nd = m1 + m2;
  if (nd > 8) throw std::invalid_argument("cover_points: hash covering supports dim <= 8");
  std::vector<std::size_t> centers;
  if (pts.empty()) return centers;

  double xmax = 0.0;
  for (const auto& p : pts) xmax = std::max(xmax, p.head(m1).norm());
  const auto [a1, a2] = norm_scales(nrm);
  CellHash hash;
  hash.m1 = m1;
  hash.m2 = m2;
  hash.sx = delta / a1;
  hash.st = (delta / a2) * (delta / a2) + 0.5 * xmax * (delta / a1) + 1e-300;

  std::vector<long long> cell(static_cast<std::size_t>(nd));
  std::vector<long long> nb(static_cast<std::size_t>(nd));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    hash.cell_of(p, cell.data());
    bool covered = false;
    // odometer over the 3^nd neighborhood
    std::vector<int> off(static_cast<std::size_t>(nd), -1);
    while (!covered) {
      for (int d = 0; d < nd; ++d) nb[static_cast<std::size_t>(d)] = cell[static_cast<std::size_t>(d)] + off[static_cast<std::size_t>(d)];
      auto it = hash.buckets.find(CellHash::key_of(nb.data(), nd));
      if (it != hash.buckets.end()) {
        for (std::uint32_t ci : it->second) {
          if (distance_coords(*alg, p, pts[centers[ci]], nrm) <= delta) {
            covered = true;
            break;
          }
        }
      }
      int d = nd;
      while (d-- > 0) {
        if (++off[static_cast<std::size_t>(d)] <= 1) break;
        off[static_cast<std::size_t>(d)] = -1;
      }
      if (d < 0) break;
    }
    if (!covered) {
      const auto ci = static_cast<std::uint32_t>(centers.size());
      centers.push_back(i);
      hash.buckets[CellHash::key_of(cell.data(), nd)].push_back(ci);
    }
  }
  return centers;
}

double DiscreteMeasure::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double DiscreteMeasure::ball_mass(const GroupPoint& center, double r, const Norm& nrm) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (distance_coords(*alg, points[i], center.c, nrm) <= r) s += weights[i];
  return s;
}

namespace {

struct DenseSample {
  std::vector<Eigen::VectorXd> pts;   // ambient coordinates of graph points
  std::vector<std::size_t> parent;    // flat grid cell index (dim 0 slowest)
};

// Midpoint sampling of the graph over a window in M coordinates, refined to
// gap_h (horizontal dims) / gap_v (vertical dims) but never coarser than the
// grid itself. The window is clamped to the grid extent.
DenseSample sample_graph(const IntrinsicGraph& graph, const Eigen::VectorXd& wlo,
                         const Eigen::VectorXd& whi, double gap_h, double gap_v,
                         std::size_t max_samples) {
  const auto& grid = graph.grid;
  const auto counts = grid.counts();
  const int dm = static_cast<int>(counts.size());
  const int mh = static_cast<int>(graph.split.m_horizontal().size());

  std::vector<int> n(static_cast<std::size_t>(dm));
  Eigen::VectorXd clo(dm), cw(dm);
  long long total = 1;
  for (int j = 0; j < dm; ++j) {
    const double ext_hi = grid.lo[j] + counts[static_cast<std::size_t>(j)] * grid.step[j];
    const double lo = std::max(wlo[j], grid.lo[j]);
    const double hi = std::min(whi[j], ext_hi);
    if (!(hi > lo)) return {};
    const double target = std::min(grid.step[j], j < mh ? gap_h : gap_v);
    const int nj = std::max(1, static_cast<int>(std::ceil((hi - lo) / target)));
    n[static_cast<std::size_t>(j)] = nj;
    clo[j] = lo;
    cw[j] = (hi - lo) / nj;
    total *= nj;
    if (total > static_cast<long long>(max_samples))
      throw std::invalid_argument("sample_graph: dense sample would exceed the sample budget");
  }

  DenseSample out;
  out.pts.reserve(static_cast<std::size_t>(total));
  out.parent.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(static_cast<std::size_t>(dm), 0);
  Eigen::VectorXd m(dm);
  for (long long flat = 0; flat < total; ++flat) {
    std::size_t cellflat = 0;
    for (int j = 0; j < dm; ++j) {
      m[j] = clo[j] + (idx[static_cast<std::size_t>(j)] + 0.5) * cw[j];
      int cj = static_cast<int>(std::floor((m[j] - grid.lo[j]) / grid.step[j]));
      cj = std::min(std::max(cj, 0), counts[static_cast<std::size_t>(j)] - 1);
      cellflat = cellflat * static_cast<std::size_t>(counts[static_cast<std::size_t>(j)]) +
                 static_cast<std::size_t>(cj);
    }
    out.pts.push_back(graph.map(m).c);
    out.parent.push_back(cellflat);
    for (int d = dm; d-- > 0;) {
      if (++idx[static_cast<std::size_t>(d)] < n[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return out;
}

// covering radius tied to the grid: twice the coarsest d_rho cell extent
double covering_delta(const IntrinsicGraph& graph, const Norm& nrm) {
  const auto [a1, a2] = norm_scales(nrm);
  const int dm = static_cast<int>(graph.grid.lo.size());
  const int mh = static_cast<int>(graph.split.m_horizontal().size());
  double d = 0.0;
  for (int j = 0; j < mh; ++j) d = std::max(d, 2.0 * a1 * graph.grid.step[j]);
  if (d == 0.0)
    for (int j = mh; j < dm; ++j) d = std::max(d, 2.0 * a2 * std::sqrt(graph.grid.step[j]));
  return d;
}

Eigen::VectorXd full_window_lo(const GridSpec& grid) { return grid.lo; }
Eigen::VectorXd full_window_hi(const GridSpec& grid) {
  const auto counts = grid.counts();
  Eigen::VectorXd hi(grid.lo.size());
  for (int j = 0; j < grid.lo.size(); ++j)
    hi[j] = grid.lo[j] + counts[static_cast<std::size_t>(j)] * grid.step[j];
  return hi;
}

// M-coordinate window guaranteed to contain the graph preimage of
// B_rho(center, r); padded for the BCH twist and the Lipschitz claim
void ball_window(const IntrinsicGraph& graph, const GroupPoint& center, double r,
                 const Norm& nrm, Eigen::VectorXd& wlo, Eigen::VectorXd& whi) {
  const auto [a1, a2] = norm_scales(nrm);
  const auto& split = graph.split;
  const Eigen::VectorXd m0 = split.m_coords(decompose(center, split).first);
  const int dm = static_cast<int>(m0.size());
  const int mh = static_cast<int>(split.m_horizontal().size());
  const double xc = center.c.head(center.alg->m1()).norm();
  const double bx = r / a1;
  const double reach = (1.0 + std::max(graph.lip_claim, 0.0)) * bx;
  wlo.resize(dm);
  whi.resize(dm);
  for (int j = 0; j < dm; ++j) {
    const double half = j < mh ? 1.05 * bx
                               : (r / a2) * (r / a2) + 0.5 * (xc + reach) * reach + reach * reach;
    wlo[j] = m0[j] - half;
    whi[j] = m0[j] + half;
  }
}

}  // namespace

GraphMeasures graph_measures(const IntrinsicGraph& graph, const Norm& nrm,
                             std::size_t max_samples) {
  const auto& grid = graph.grid;
  const auto counts = grid.counts();
  const long long ncells = grid.total();
  const int dm = static_cast<int>(counts.size());

  GraphMeasures out;
  out.metric_dim = graph.split.metric_dim_m();
  const double delta = covering_delta(graph, nrm);
  out.covering_radius = delta;

  double cellvol = 1.0;
  for (int j = 0; j < dm; ++j) cellvol *= grid.step[j];

  const AlgebraPtr alg = graph.split.algebra();
  out.mu.alg = alg;
  out.mu.label = "mu";
  out.mu.points.reserve(static_cast<std::size_t>(ncells));
  out.mu.weights.assign(static_cast<std::size_t>(ncells), cellvol);
  std::vector<int> idx(static_cast<std::size_t>(dm), 0);
  for (long long flat = 0; flat < ncells; ++flat) {
    out.mu.points.push_back(graph.map(grid.center(idx)).c);
    for (int d = dm; d-- > 0;) {
      if (++idx[static_cast<std::size_t>(d)] < counts[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }

  const auto [a1, a2] = norm_scales(nrm);
  const double gh = delta / (2.0 * a1);
  const double gv = (delta / (2.0 * a2)) * (delta / (2.0 * a2));
  const DenseSample dense =
      sample_graph(graph, full_window_lo(grid), full_window_hi(grid), gh, gv, max_samples);
  const auto centers = cover_points(alg, dense.pts, delta, nrm);

  out.sigma.alg = alg;
  out.sigma.label = "sigma";
  out.sigma.points = out.mu.points;
  out.sigma.weights.assign(static_cast<std::size_t>(ncells), 0.0);
  const double ballw = std::pow(2.0 * delta, out.metric_dim);
  for (std::size_t ci : centers) out.sigma.weights[dense.parent[ci]] += ballw;
  out.covering_balls = centers.size();
  return out;
}

double ball_sigma_estimate(const IntrinsicGraph& graph, const GroupPoint& center, double r,
                           int divisor, const Norm& nrm) {
  if (divisor < 2) throw std::invalid_argument("ball_sigma_estimate: divisor must be >= 2");
  if (!(r > 0.0)) throw std::invalid_argument("ball_sigma_estimate: radius must be positive");
  const double delta = r / divisor;
  const auto [a1, a2] = norm_scales(nrm);
  Eigen::VectorXd wlo, whi;
  ball_window(graph, center, r, nrm, wlo, whi);
  const double gh = delta / (2.0 * a1);
  const double gv = (delta / (2.0 * a2)) * (delta / (2.0 * a2));
  const DenseSample dense = sample_graph(graph, wlo, whi, gh, gv, 64000000);

  const AlgebraPtr alg = graph.split.algebra();
  std::vector<Eigen::VectorXd> inside;
  inside.reserve(dense.pts.size() / 4 + 1);
  for (const auto& p : dense.pts)
    if (distance_coords(*alg, p, center.c, nrm) <= r) inside.push_back(p);
  const auto centers = cover_points(alg, inside, delta, nrm);
  return static_cast<double>(centers.size()) *
         std::pow(2.0 * delta, graph.split.metric_dim_m());
}

std::vector<Eigen::VectorXd> annulus_cover_centers(const IntrinsicGraph& graph, double r_lo,
                                                   double r_hi, double delta, const Norm& nrm) {
  if (!(r_hi > r_lo) || !(r_lo >= 0.0))
    throw std::invalid_argument("annulus_cover_centers: need 0 <= r_lo < r_hi");
  const AlgebraPtr alg = graph.split.algebra();
  const GroupPoint e = identity_point(alg);
  const auto [a1, a2] = norm_scales(nrm);
  Eigen::VectorXd wlo, whi;
  ball_window(graph, e, r_hi, nrm, wlo, whi);
  const double gh = delta / (2.0 * a1);
  const double gv = (delta / (2.0 * a2)) * (delta / (2.0 * a2));
  const DenseSample dense = sample_graph(graph, wlo, whi, gh, gv, 64000000);

  std::vector<Eigen::VectorXd> inside;
  for (const auto& p : dense.pts) {
    const double d = norm_coords(*alg, p, nrm);
    if (d > r_lo && d <= r_hi) inside.push_back(p);
  }
  const auto centers = cover_points(alg, inside, delta, nrm);
  std::vector<Eigen::VectorXd> out;
  out.reserve(centers.size());
  for (std::size_t ci : centers) out.push_back(inside[ci]);
  return out;
}

IntegrateReport integrate_on_graph(const IntrinsicGraph& graph,
                                   const std::function<double(const Eigen::VectorXd&)>& h,
                                   const Norm& nrm, Exec exec) {
  const GraphMeasures gm = graph_measures(graph, nrm);
  IntegrateReport rep;
  rep.lhs_sigma = reduce_sum(
      gm.sigma.points.size(),
      [&](std::size_t i) { return gm.sigma.weights[i] * h(gm.sigma.points[i]); }, exec);
  rep.rhs_mu = reduce_sum(
      gm.mu.points.size(),
      [&](std::size_t i) { return gm.mu.weights[i] * h(gm.mu.points[i]); }, exec);

  // measure the comparability band on a few concrete balls
  const auto counts = graph.grid.counts();
  std::vector<int> mid(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) mid[j] = counts[j] / 2;
  const GroupPoint p0 = graph.map(graph.grid.center(mid));
  double spread = 0.0;
  for (const auto& p : gm.mu.points)
    spread = std::max(spread, distance_coords(*gm.mu.alg, p, p0.c, nrm));
  rep.band_lo = std::numeric_limits<double>::infinity();
  rep.band_hi = 0.0;
  for (double frac : {0.25, 0.4, 0.6}) {
    const double r = frac * spread;
    const double ms = gm.sigma.ball_mass(p0, r, nrm);
    const double mm = gm.mu.ball_mass(p0, r, nrm);
    if (ms <= 0.0) continue;
    rep.band_lo = std::min(rep.band_lo, mm / ms);
    rep.band_hi = std::max(rep.band_hi, mm / ms);
  }
  if (rep.band_hi >= rep.band_lo && rep.band_hi > 0.0) {
    const double slack = 1e-9 * std::max(std::abs(rep.rhs_mu), 1.0);
    rep.inside_band = rep.band_lo * rep.lhs_sigma <= rep.rhs_mu + slack &&
                      rep.rhs_mu <= rep.band_hi * rep.lhs_sigma + slack;
  }
  return rep;
}

}  // namespace carnot
