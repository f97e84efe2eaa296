#pragma once

#include <utility>

#include "carnot/algebra.hpp"

namespace carnot {

// Exact step-2 Baker-Campbell-Hausdorff product:
//   (x_a, t_a) . (x_b, t_b) = (x_a + x_b, t_a + t_b + [x_a, x_b]/2)
GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& a);

// dilation delta_lambda(x, t) = (lambda x, lambda^2 t); lambda > 0
GroupPoint dilate(const GroupPoint& a, double lambda);

enum class NormKind { MaxHomog, CyganGauge };

struct Norm {
  NormKind kind = NormKind::MaxHomog;
  // MaxHomog weights: max(eps1 |x|, eps2 |t|^(1/2)); ignored by CyganGauge
  double eps1 = 1.0;
  double eps2 = 1.0;

  static Norm max_homog(double e1 = 1.0, double e2 = 1.0) { return {NormKind::MaxHomog, e1, e2}; }
  static Norm cygan() { return {NormKind::CyganGauge, 1.0, 1.0}; }
  std::string name() const;
};

double norm(const GroupPoint& a, const Norm& nrm);
// norm from raw coordinates (hot paths)
double norm_coords(const HTypeAlgebra& alg, const Eigen::VectorXd& coords, const Norm& nrm);

// d(p, q) = ||q^{-1} . p||
double distance(const GroupPoint& p, const GroupPoint& q, const Norm& nrm);

// same, on raw coordinate vectors without constructing group points
double distance_coords(const HTypeAlgebra& alg, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, const Norm& nrm);

// (a1, a2) with ||(x, 0)|| = a1 |x| and ||(0, t)|| = a2 sqrt(|t|)
std::pair<double, double> norm_scales(const Norm& nrm);

// Left-invariant frame at g: N x N matrix whose first m1 columns are the
// horizontal frame fields X_j(g) = e_j + sum_a (J_a x)_j / 2 * d/dt_a and last
// m2 columns the vertical fields d/dt_a. H-type kinds only.
Eigen::MatrixXd frame(const GroupPoint& g);

// Coefficients of a Euclidean tangent vector v at g in the frame at g.
// Closed form: horizontal part passes through, vertical part gets the
// (J_a x, v_h)/2 correction subtracted.
Eigen::VectorXd frame_coefficients(const GroupPoint& g, const Eigen::VectorXd& v);

struct HorizontalityReport {
  double max_vertical_defect = 0.0;  // max |vertical frame coefficient|
  double mean_vertical_defect = 0.0;
  bool horizontal = false;  // defect below tolerance
};

// Samples the curve at `samples` uniform parameters, takes central-difference
// velocities and measures their vertical frame coefficients at the middle
// sample. curve maps [t0, t1] -> coordinates.
HorizontalityReport is_horizontal(const AlgebraPtr& alg,
                                  const std::function<Eigen::VectorXd(double)>& curve, double t0,
                                  double t1, int samples, double tol);

}  // namespace carnot
