#pragma once

#include <functional>

#include "carnot/group_ops.hpp"
#include "carnot/parallel.hpp"

namespace carnot {

// Complementary orthogonal pair (M, H) of homogeneous coordinate subalgebras.
// M is given by index lists into the horizontal (0..m1-1) and vertical
// (0..m2-1) coordinates; H takes the complementary indices. Construction
// validates bracket closure of both sides: [span M_h, span M_h] inside
// span M_v and likewise for H.
class HomogeneousSplit {
 public:
  HomogeneousSplit(AlgebraPtr alg, std::vector<int> m_h, std::vector<int> m_v);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::vector<int>& m_horizontal() const { return m_h_; }
  const std::vector<int>& m_vertical() const { return m_v_; }
  const std::vector<int>& h_horizontal() const { return h_h_; }
  const std::vector<int>& h_vertical() const { return h_v_; }

  int dim_m() const { return static_cast<int>(m_h_.size() + m_v_.size()); }
  int dim_h() const { return static_cast<int>(h_h_.size() + h_v_.size()); }
  // metric (homogeneous) dimensions: horizontal counts once, vertical twice
  int metric_dim_m() const { return static_cast<int>(m_h_.size() + 2 * m_v_.size()); }
  int metric_dim_h() const { return static_cast<int>(h_h_.size() + 2 * h_v_.size()); }

  // embed subspace coordinates (ordered m_h then m_v / h_h then h_v) as points
  GroupPoint point_from_m(const Eigen::VectorXd& coords) const;
  GroupPoint point_from_h(const Eigen::VectorXd& coords) const;
  Eigen::VectorXd m_coords(const GroupPoint& p) const;
  Eigen::VectorXd h_coords(const GroupPoint& p) const;

 private:
  AlgebraPtr alg_;
  std::vector<int> m_h_, m_v_, h_h_, h_v_;
};

// unique factorization g = m . h; closed form for coordinate splits
std::pair<GroupPoint, GroupPoint> decompose(const GroupPoint& g, const HomogeneousSplit& split);

GroupPoint project_m(const GroupPoint& g, const HomogeneousSplit& split);
GroupPoint project_h(const GroupPoint& g, const HomogeneousSplit& split);

// p in C(vertex, beta) iff ||P_M(vertex^{-1} p)|| <= beta ||P_H(vertex^{-1} p)||
// (boundary inclusive).
bool cone_contains(const HomogeneousSplit& split, const GroupPoint& vertex, double beta,
                   const GroupPoint& p, const Norm& nrm);

struct GridSpec {
  Eigen::VectorXd lo, hi, step;
  std::vector<int> counts() const;
  long long total() const;
  // cell centers, row-major over dims
  Eigen::VectorXd center(const std::vector<int>& idx) const;
};

// Intrinsic graph of f over a grid on M: points m . f(m). f maps M-subspace
// coordinates to H-subspace coordinates.
struct IntrinsicGraph {
  HomogeneousSplit split;
  GridSpec grid;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  double lip_claim = 1.0;

  GroupPoint map(const Eigen::VectorXd& m_coords) const;
};

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> graph_f_zero(int dim_h);
std::function<Eigen::VectorXd(const Eigen::VectorXd&)> graph_f_linear(const Eigen::MatrixXd& b);

// all graph points on the grid, subsampled deterministically to at most cap
std::vector<Eigen::VectorXd> graph_points(const IntrinsicGraph& graph, std::size_t cap = 10000);

struct ConeReport {
  bool ok = false;
  double worst_margin = 0.0;  // min over pairs of ||P_M|| - (1/L) ||P_H||
  std::size_t worst_i = 0, worst_j = 0;
  std::size_t points = 0;
  unsigned long long pairs = 0;
};

// Checks q outside C(p, 1/L) for every ordered pair of graph points
// (strict violation only: a pair exactly on the cone boundary passes).
ConeReport verify_cone(const IntrinsicGraph& graph, double lip, const Norm& nrm,
                       Exec exec = Exec::Parallel, std::size_t cap = 10000);

struct C0Report {
  double c0 = 0.0;
  Eigen::VectorXd worst_m, worst_h;  // subspace coordinates attaining the min
  int samples = 0;
};

// Monte Carlo minimum of ||m . h|| over ||m|| + ||h|| = 1 (running minimum;
// scaling realized by dilations, which scale homogeneous norms exactly).
C0Report c0_estimate(const HomogeneousSplit& split, const Norm& nrm, int samples,
                     std::uint64_t seed);

}  // namespace carnot
