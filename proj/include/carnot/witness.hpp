#pragma once

#include <memory>
#include <string>
#include <unordered_map>

#include "carnot/graph_measure.hpp"
#include "carnot/modulus.hpp"

namespace carnot {

enum class WitnessKind { RadialPow, RadialLog, VitaliPhi, SplitComposite };

// Nonnegative functions certifying that a family of surface measures is
// p-exceptional: finite L^p mass against Haar, infinite integral along every
// surface of the family (checked numerically by the estimators below).
class WitnessFunction {
 public:
  // ||g||^{-dm} on ||g|| < 1, else 0
  static WitnessFunction radial_pow(AlgebraPtr alg, double dm, Norm nrm);
  // ||g||^{-dm} (log(2/||g||))^{-alpha} on ||g|| < 1, else 0
  static WitnessFunction radial_log(AlgebraPtr alg, double dm, double alpha, Norm nrm);
  // sum_i 2^{-i} |xi_i - z|^{-1} psi(xi_i - z) over a cubic lattice of centers
  // with spacing 2 r / sqrt(dim) covering [lo, hi] (so every point of the box
  // lies within r of a center); psi ramps smoothly from 1 (|y| <= 2r) to
  // 0 (|y| >= 3r); weights follow the by-distance-from-origin order, 1-based
  static WitnessFunction vitali_phi(int dim, double r, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi);
  // sum of per-split witnesses evaluated on the M-component of g = m . h
  static WitnessFunction split_composite(
      std::vector<std::pair<HomogeneousSplit, WitnessFunction>> parts);

  WitnessKind kind() const { return kind_; }
  int space_dim() const;
  double eval(const Eigen::VectorXd& z) const;
  // distance to the singular set (d_rho for radial kinds, Euclidean distance
  // to the nearest lattice center for VitaliPhi, min over parts composite)
  double singular_distance(const Eigen::VectorXd& z) const;
  const std::vector<Eigen::VectorXd>& vitali_centers() const { return centers_; }

 private:
  WitnessFunction() = default;
  WitnessKind kind_ = WitnessKind::RadialPow;
  AlgebraPtr alg_;
  Norm nrm_;
  double dm_ = 0.0, alpha_ = 0.0;
  int dim_ = 0;
  double r_ = 0.0, spacing_ = 0.0;
  std::vector<Eigen::VectorXd> centers_;
  std::vector<double> center_weight_;
  std::unordered_map<std::uint64_t, int> lattice_;
  std::vector<HomogeneousSplit> splits_;
  std::vector<std::shared_ptr<const WitnessFunction>> parts_;
};

struct LpReport {
  std::vector<double> values;       // refinement levels, singular core excluded
  std::vector<double> rel_changes;  // |I_l - I_{l-1}| / |I_l|
  double slope = 0.0;               // log I vs log (1/core)
  bool converging = false;          // slope <= 0.1
};

// Riemann sums of eval^p over the box with cells within `core` of the
// singular set excluded; each level halves both the grid step and the core.
LpReport lp_norm_estimate(const WitnessFunction& w, double p, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, double base_step, double base_core,
                          int levels = 3, Exec exec = Exec::Parallel);

struct SurfaceReport {
  std::vector<double> ring_sums;  // integral over dyadic rings via covering
  double beta = 0.0;              // fitted decay: sums ~ c (j+2)^{-beta}
  double max_min_ratio = 0.0;
  bool diverging = false;  // beta < 1 with positive sums
  bool confident = false;  // |beta - 1| >= 0.1
};

// Per-ring covering estimate of the witness integral against the graph's
// spherical measure on rings 2^{-j-1} < ||g|| <= 2^{-j}, j in [j_lo, j_hi];
// ball radius 2^{-j} / divisor. The series sums the rings, so it diverges
// exactly when the fitted polynomial decay in j is slower than (j+2)^{-1}.
SurfaceReport surface_divergence_check(const IntrinsicGraph& graph, const WitnessFunction& w,
                                       int j_lo, int j_hi, int divisor, const Norm& nrm);

enum class Verdict { Exceptional, NonExceptional, Infinite, Inconclusive };
std::string verdict_name(Verdict v);

struct RefinementReport {
  std::vector<double> values;
  std::vector<bool> infinite;
  std::vector<bool> converged;
  std::vector<double> kkt;
  Verdict verdict = Verdict::Inconclusive;
};

// Solves a refinement ladder of modulus programs and classifies the trend:
// every step decaying below decay_ratio => Exceptional; total variation below
// `variation` => NonExceptional; all levels infinite => Infinite.
RefinementReport fuglede_refinement_study(const std::vector<ModulusProblem>& ladder,
                                          double decay_ratio = 0.7, double variation = 0.2,
                                          double tol = 1e-9, int max_sweeps = 20000,
                                          Exec exec = Exec::Parallel);

// --- fixture builders ------------------------------------------------------

// polar annulus 1 <= r <= 2, cells (shell, sector) with exact Lebesgue
// masses; one measure per sector: the radial segment crossing its cells
ModulusProblem annulus_radial_problem(int shells, int sectors, double p);

// unit disk with log-spaced shells on [eps, 1]; measures are the diameters
// (sectors must be even); each diameter charges two opposite cells per shell
ModulusProblem disk_diameter_problem(int shells, int sectors, double eps, double p);

// Cartesian ambient [-1, 1]^n; the family is one k-plane through the origin
// per orthonormal basis (n x k), discretized as arc-length bins on the grid
ModulusProblem plane_family_problem(int n, int k, int cells_per_dim,
                                    const std::vector<Eigen::MatrixXd>& planes, double p);

}  // namespace carnot
