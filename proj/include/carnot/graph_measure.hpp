#pragma once

#include "carnot/split.hpp"

namespace carnot {

struct DiscreteMeasure {
  AlgebraPtr alg;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;
  std::string label;

  double total() const;
  // mass inside the d_rho ball B(center, r)
  double ball_mass(const GroupPoint& center, double r, const Norm& nrm) const;
};

struct GraphMeasures {
  DiscreteMeasure mu;     // pushforward of the M-cell Lebesgue masses through the graph map
  DiscreteMeasure sigma;  // spherical-covering estimate distributed over the same points
  int metric_dim = 0;
  double covering_radius = 0.0;
  std::size_t covering_balls = 0;
};

// mu: atom at graph(cell center) with weight = cell volume.
// sigma: the graph is sampled densely enough to resolve d_rho at scale
// delta = 2 x (horizontal grid step), greedily covered by d_rho-balls of
// radius delta, and each ball contributes (2 delta)^{d_m} to the atom at its
// parent cell. max_samples guards against accidentally huge dense samples.
GraphMeasures graph_measures(const IntrinsicGraph& graph, const Norm& nrm,
                             std::size_t max_samples = 4000000);

// Covering estimate of sigma(S cap B(center, r)) at ball radius r/divisor;
// the dense sample is generated locally around the ball, so deep scales stay
// affordable. Returns count * (2 r / divisor)^{d_m}.
double ball_sigma_estimate(const IntrinsicGraph& graph, const GroupPoint& center, double r,
                           int divisor, const Norm& nrm);

// Ball centers of a covering (radius delta) of the part of the graph lying in
// the annulus r_lo < ||center^{-1} g|| <= r_hi around e.
std::vector<Eigen::VectorXd> annulus_cover_centers(const IntrinsicGraph& graph, double r_lo,
                                                   double r_hi, double delta, const Norm& nrm);

// Greedy d_rho ball covering of an explicit point set: returns chosen center
// indices in input order. Every point ends up within delta of a center and
// centers are pairwise more than delta apart.
std::vector<std::size_t> cover_points(const AlgebraPtr& alg,
                                      const std::vector<Eigen::VectorXd>& pts, double delta,
                                      const Norm& nrm);

struct IntegrateReport {
  double lhs_sigma = 0.0;  // integral of h against sigma
  double rhs_mu = 0.0;     // integral of h against mu
  double band_lo = 0.0;    // min over test balls of mu(B)/sigma(B)
  double band_hi = 0.0;    // max
  bool inside_band = false;
};

// Compares the two graph measures on one integrand: the contract is
// band_lo * lhs <= rhs <= band_hi * lhs with the band measured, not assumed.
IntegrateReport integrate_on_graph(const IntrinsicGraph& graph,
                                   const std::function<double(const Eigen::VectorXd&)>& h,
                                   const Norm& nrm, Exec exec = Exec::Parallel);

}  // namespace carnot
