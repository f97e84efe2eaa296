#pragma once

#include "carnot/graph_measure.hpp"

namespace carnot {

struct BoxDimensionReport {
  std::vector<double> radii;
  std::vector<std::size_t> counts;  // greedy covering counts at each radius
  double dimension = 0.0;           // least-squares slope of log N vs log(1/r)
};

// Covering-number box dimension of an explicit point cloud in d_rho.
BoxDimensionReport box_dimension(const AlgebraPtr& alg, const std::vector<Eigen::VectorXd>& pts,
                                 const std::vector<double>& radii, const Norm& nrm);

struct ScalingReport {
  double ratio = 0.0;     // vol(delta_lambda E) / vol(E) for a coordinate box E
  double expected = 0.0;  // lambda^Q
};

// Haar measure is Lebesgue in exponential coordinates; a dilation scales a
// coordinate box by lambda per horizontal dim and lambda^2 per vertical dim.
ScalingReport haar_scaling_check(const AlgebraPtr& alg, const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi, double lambda);

struct FubiniReport {
  double lhs = 0.0;      // integral of kappa over the group, N-dim Riemann sum
  double rhs = 0.0;      // iterated sum over H-grid of M-coset integrals
  double rel_err = 0.0;  // |lhs - rhs| / max(|lhs|, tiny)
};

// Unrolls the Haar integral along cosets of M: every g factors uniquely as
// g = m . h, and integrating kappa(m . h) over (m, h) with the product of the
// subspace Lebesgue measures reproduces the group integral.
// step: grid resolution used in all three sums; mbox/hbox: half-widths of the
// subspace windows (must contain the supports of the slices).
FubiniReport coset_fubini(const HomogeneousSplit& split,
                          const std::function<double(const Eigen::VectorXd&)>& kappa,
                          const Eigen::VectorXd& glo, const Eigen::VectorXd& ghi, double mpad,
                          double hpad, double step, Exec exec = Exec::Parallel);

// Smooth compactly supported bump: prod_j s((x_j - lo_j) / (hi_j - lo_j)) with
// s the standard C-infinity glue, vanishing outside the open box.
std::function<double(const Eigen::VectorXd&)> bump_on_box(const Eigen::VectorXd& lo,
                                                          const Eigen::VectorXd& hi);

}  // namespace carnot
