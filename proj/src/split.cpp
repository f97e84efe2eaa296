#include "carnot/split.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "carnot/rng.hpp"

namespace carnot {

namespace {

constexpr int kMaxDim = 32;

std::vector<int> complement_of(const std::vector<int>& chosen, int size, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(size), false);
  for (int i : chosen) {
    if (i < 0 || i >= size) throw std::invalid_argument(std::string(what) + ": index out of range");
    if (seen[static_cast<std::size_t>(i)])
      throw std::invalid_argument(std::string(what) + ": repeated index");
    seen[static_cast<std::size_t>(i)] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < size; ++i)
    if (!seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

void check_closure(const HTypeAlgebra& alg, const std::vector<int>& part_h,
                   const std::vector<int>& part_v, const char* side) {
  std::vector<bool> in_v(static_cast<std::size_t>(alg.m2()), false);
  for (int a : part_v) in_v[static_cast<std::size_t>(a)] = true;
  for (std::size_t i = 0; i < part_h.size(); ++i) {
    for (std::size_t j = i + 1; j < part_h.size(); ++j) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(alg.m1());
      Eigen::VectorXd v = Eigen::VectorXd::Zero(alg.m1());
      u[part_h[i]] = 1.0;
      v[part_h[j]] = 1.0;
      const Eigen::VectorXd br = alg.bracket(u, v);
      for (int a = 0; a < alg.m2(); ++a) {
        if (!in_v[static_cast<std::size_t>(a)] && std::abs(br[a]) > 1e-12)
          throw std::invalid_argument(std::string("split: ") + side +
                                      " is not bracket-closed (horizontal pair brackets outside "
                                      "its vertical part)");
      }
    }
  }
}

double subspace_norm(const Norm& nrm, double nx, double nt) {
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

}  // namespace

HomogeneousSplit::HomogeneousSplit(AlgebraPtr alg, std::vector<int> m_h, std::vector<int> m_v)
    : alg_(std::move(alg)), m_h_(std::move(m_h)), m_v_(std::move(m_v)) {
  if (!alg_) throw std::invalid_argument("split: null algebra");
  if (alg_->dim() > kMaxDim) throw std::invalid_argument("split: algebra dimension too large");
  std::sort(m_h_.begin(), m_h_.end());
  std::sort(m_v_.begin(), m_v_.end());
  h_h_ = complement_of(m_h_, alg_->m1(), "split horizontal part");
  h_v_ = complement_of(m_v_, alg_->m2(), "split vertical part");
  if (m_h_.empty() && m_v_.empty()) throw std::invalid_argument("split: M is trivial");
  if (h_h_.empty() && h_v_.empty()) throw std::invalid_argument("split: H is trivial");
  check_closure(*alg_, m_h_, m_v_, "M");
  check_closure(*alg_, h_h_, h_v_, "H");
}

GroupPoint HomogeneousSplit::point_from_m(const Eigen::VectorXd& coords) const {
  if (coords.size() != dim_m()) throw std::invalid_argument("point_from_m: bad coordinate length");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(alg_->dim());
  int k = 0;
  for (int i : m_h_) c[i] = coords[k++];
  for (int a : m_v_) c[alg_->m1() + a] = coords[k++];
  return GroupPoint(alg_, std::move(c));
}

GroupPoint HomogeneousSplit::point_from_h(const Eigen::VectorXd& coords) const {
  if (coords.size() != dim_h()) throw std::invalid_argument("point_from_h: bad coordinate length");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(alg_->dim());
  int k = 0;
  for (int i : h_h_) c[i] = coords[k++];
  for (int a : h_v_) c[alg_->m1() + a] = coords[k++];
  return GroupPoint(alg_, std::move(c));
}

Eigen::VectorXd HomogeneousSplit::m_coords(const GroupPoint& p) const {
  Eigen::VectorXd out(dim_m());
  int k = 0;
  for (int i : m_h_) out[k++] = p.c[i];
  for (int a : m_v_) out[k++] = p.c[alg_->m1() + a];
  return out;
}

Eigen::VectorXd HomogeneousSplit::h_coords(const GroupPoint& p) const {
  Eigen::VectorXd out(dim_h());
  int k = 0;
  for (int i : h_h_) out[k++] = p.c[i];
  for (int a : h_v_) out[k++] = p.c[alg_->m1() + a];
  return out;
}

std::pair<GroupPoint, GroupPoint> decompose(const GroupPoint& g, const HomogeneousSplit& split) {
  if (g.alg.get() != split.algebra().get() && !g.alg->same_structure(*split.algebra()))
    throw std::invalid_argument("decompose: point and split algebras differ");
  const auto& alg = *split.algebra();
  const int m1 = alg.m1();
  Eigen::VectorXd xm = Eigen::VectorXd::Zero(m1);
  Eigen::VectorXd xh = Eigen::VectorXd::Zero(m1);
  for (int i : split.m_horizontal()) xm[i] = g.c[i];
  for (int i : split.h_horizontal()) xh[i] = g.c[i];
  Eigen::VectorXd m = Eigen::VectorXd::Zero(alg.dim());
  Eigen::VectorXd h = Eigen::VectorXd::Zero(alg.dim());
  m.head(m1) = xm;
  h.head(m1) = xh;
  if (alg.m2() > 0) {
    const Eigen::VectorXd w = g.c.tail(alg.m2()) - 0.5 * alg.bracket(xm, xh);
    for (int a : split.m_vertical()) m[m1 + a] = w[a];
    for (int a : split.h_vertical()) h[m1 + a] = w[a];
  }
  return {GroupPoint(g.alg, std::move(m)), GroupPoint(g.alg, std::move(h))};
}

GroupPoint project_m(const GroupPoint& g, const HomogeneousSplit& split) {
  return decompose(g, split).first;
}

GroupPoint project_h(const GroupPoint& g, const HomogeneousSplit& split) {
  return decompose(g, split).second;
}

bool cone_contains(const HomogeneousSplit& split, const GroupPoint& vertex, double beta,
                   const GroupPoint& p, const Norm& nrm) {
  if (beta < 0.0) throw std::invalid_argument("cone_contains: beta must be nonnegative");
  const GroupPoint rel = multiply(inverse(vertex), p);
  const auto [m, h] = decompose(rel, split);
  return norm(m, nrm) <= beta * norm(h, nrm);
}

std::vector<int> GridSpec::counts() const {
  std::vector<int> n(static_cast<std::size_t>(lo.size()));
  for (int d = 0; d < lo.size(); ++d) {
    if (!(step[d] > 0.0)) throw std::invalid_argument("grid: step must be positive");
    n[static_cast<std::size_t>(d)] =
        std::max(1, static_cast<int>(std::llround((hi[d] - lo[d]) / step[d])));
  }
  return n;
}

long long GridSpec::total() const {
  long long t = 1;
  for (int n : counts()) t *= n;
  return t;
}

Eigen::VectorXd GridSpec::center(const std::vector<int>& idx) const {
  Eigen::VectorXd c(lo.size());
  for (int d = 0; d < lo.size(); ++d)
    c[d] = lo[d] + (idx[static_cast<std::size_t>(d)] + 0.5) * step[d];
  return c;
}

GroupPoint IntrinsicGraph::map(const Eigen::VectorXd& m_coords) const {
  const GroupPoint m = split.point_from_m(m_coords);
  const GroupPoint h = split.point_from_h(f(m_coords));
  return multiply(m, h);
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> graph_f_zero(int dim_h) {
  return [dim_h](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim_h).eval(); };
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> graph_f_linear(const Eigen::MatrixXd& b) {
  return [b](const Eigen::VectorXd& m) { return (b * m).eval(); };
}

std::vector<Eigen::VectorXd> graph_points(const IntrinsicGraph& graph, std::size_t cap) {
  const auto counts = graph.grid.counts();
  const long long total = graph.grid.total();
  std::vector<Eigen::VectorXd> pts;
  const long long keep = std::min<long long>(total, static_cast<long long>(cap));
  pts.reserve(static_cast<std::size_t>(keep));
  // deterministic stride subsample of the flattened grid
  std::vector<int> idx(counts.size(), 0);
  long long next_keep = 0;
  long long kept = 0;
  for (long long flat = 0; flat < total; ++flat) {
    if (flat == next_keep && kept < keep) {
      pts.push_back(graph.map(graph.grid.center(idx)).c);
      ++kept;
      next_keep = keep > 1 ? (kept * (total - 1)) / (keep - 1) : total;
    }
    for (std::size_t d = idx.size(); d-- > 0;) {
      if (++idx[d] < counts[d]) break;
      idx[d] = 0;
    }
  }
  return pts;
}

ConeReport verify_cone(const IntrinsicGraph& graph, double lip, const Norm& nrm, Exec exec,
                       std::size_t cap) {
  if (!(lip > 0.0)) throw std::invalid_argument("verify_cone: Lipschitz constant must be positive");
  const auto pts = graph_points(graph, cap);
  const std::size_t n = pts.size();
  ConeReport rep;
  rep.points = n;
  if (n < 2) {
    rep.ok = true;
    return rep;
  }
  const auto& alg = *graph.split.algebra();
  const int m1 = alg.m1();
  const int m2 = alg.m2();
  const int dim = alg.dim();

  // flat column-major buffer for the pair scan
  std::vector<double> buf(static_cast<std::size_t>(dim) * n);
  for (std::size_t i = 0; i < n; ++i)
    std::memcpy(buf.data() + static_cast<std::size_t>(dim) * i, pts[i].data(),
                sizeof(double) * static_cast<std::size_t>(dim));

  std::vector<char> in_mh(static_cast<std::size_t>(m1), 0), in_mv(static_cast<std::size_t>(m2), 0);
  for (int i : graph.split.m_horizontal()) in_mh[static_cast<std::size_t>(i)] = 1;
  for (int a : graph.split.m_vertical()) in_mv[static_cast<std::size_t>(a)] = 1;

  std::vector<const double*> jdata(static_cast<std::size_t>(m2));
  for (int a = 0; a < m2; ++a) jdata[static_cast<std::size_t>(a)] = alg.j_matrix(a).data();

  const double inv_l = 1.0 / lip;
  const unsigned long long npairs =
      static_cast<unsigned long long>(n) * static_cast<unsigned long long>(n - 1);
  rep.pairs = npairs;

  auto margin_of = [&](std::size_t k) {
    const std::size_t i = k / (n - 1);
    std::size_t j = k % (n - 1);
    if (j >= i) ++j;
    const double* p = buf.data() + static_cast<std::size_t>(dim) * i;
    const double* q = buf.data() + static_cast<std::size_t>(dim) * j;
    double dx[kMaxDim], xm[kMaxDim], xh[kMaxDim];
    for (int d = 0; d < m1; ++d) {
      dx[d] = q[d] - p[d];
      xm[d] = in_mh[static_cast<std::size_t>(d)] ? dx[d] : 0.0;
      xh[d] = in_mh[static_cast<std::size_t>(d)] ? 0.0 : dx[d];
    }
    double nxm = 0.0, nxh = 0.0;
    for (int d = 0; d < m1; ++d) {
      nxm += xm[d] * xm[d];
      nxh += xh[d] * xh[d];
    }
    double ntm = 0.0, nth = 0.0;
    for (int a = 0; a < m2; ++a) {
      // vertical part of p^{-1} q, then subtract the mixed half-bracket:
      // needs (J_a x_p) . x_q and (J_a xm) . xh; column-major J storage
      const double* ja = jdata[static_cast<std::size_t>(a)];
      double br_pq = 0.0;  // [x_p, x_q]_a
      double br_mh = 0.0;  // [xm, xh]_a
      for (int r = 0; r < m1; ++r) {
        double jp = 0.0, jm = 0.0;
        for (int c = 0; c < m1; ++c) {
          jp += ja[r + c * m1] * p[c];
          jm += ja[r + c * m1] * xm[c];
        }
        br_pq += jp * q[r];
        br_mh += jm * xh[r];
      }
      const double w = (q[m1 + a] - p[m1 + a] - 0.5 * br_pq) - 0.5 * br_mh;
      if (in_mv[static_cast<std::size_t>(a)])
        ntm += w * w;
      else
        nth += w * w;
    }
    const double nm = subspace_norm(nrm, std::sqrt(nxm), std::sqrt(ntm));
    const double nh = subspace_norm(nrm, std::sqrt(nxh), std::sqrt(nth));
    return nm - inv_l * nh;
  };

  auto [worst, at] = reduce_min(static_cast<std::size_t>(npairs), margin_of, exec);
  rep.worst_margin = worst;
  rep.worst_i = at / (n - 1);
  rep.worst_j = at % (n - 1);
  if (rep.worst_j >= rep.worst_i) ++rep.worst_j;
  rep.ok = worst >= 0.0;
  return rep;
}

C0Report c0_estimate(const HomogeneousSplit& split, const Norm& nrm, int samples,
                     std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("c0_estimate: need samples");
  Rng rng(seed);
  C0Report rep;
  rep.c0 = std::numeric_limits<double>::infinity();
  rep.samples = samples;
  const int dm = split.dim_m();
  const int dh = split.dim_h();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd um(dm), uh(dh);
    for (int d = 0; d < dm; ++d) um[d] = rng.gaussian();
    for (int d = 0; d < dh; ++d) uh[d] = rng.gaussian();
    GroupPoint m = split.point_from_m(um);
    GroupPoint h = split.point_from_h(uh);
    const double nm = norm(m, nrm);
    const double nh = norm(h, nrm);
    if (nm <= 0.0 || nh <= 0.0) continue;
    const double tau = rng.uniform();
    m = dilate(m, tau / nm);
    h = dilate(h, (1.0 - tau) / nh);
    const double v = norm(multiply(m, h), nrm);
    if (v < rep.c0) {
      rep.c0 = v;
      rep.worst_m = split.m_coords(m);
      rep.worst_h = split.h_coords(h);
    }
  }
  return rep;
}

}  // namespace carnot
