#pragma once

#include <functional>
#include <string>

#include "carnot/grassmann.hpp"
#include "carnot/modulus.hpp"

namespace carnot {

double sphere_area(int d);  // |S^{d-1}|

struct CroftonReport {
  double mc_mean = 0.0;    // Monte Carlo average of the subspace integrals
  double mc_se = 0.0;      // batch-means standard error
  double ambient = 0.0;    // weighted ambient integral
  double ratio = 0.0;      // mc_mean / ambient
  double ratio_se = 0.0;
  double expected = 0.0;   // sphere-area ratio the identity predicts
  int samples = 0;
  int batches = 0;
};

// E_R [ integral of f over R V-hat ] = c(n, k) integral |x|^{k-n} f(x) dx
// over Haar-rotated k-planes through the origin, c = |S^{k-1}| / |S^{n-1}|.
// f must vanish outside |x| <= radius. The ambient quadrature handles the
// singular origin cell by an exact polar patch of equal volume.
CroftonReport euclidean_crofton(int n, int k, const std::function<double(const Eigen::VectorXd&)>& f,
                                double radius, int samples, std::uint64_t seed, double plane_step,
                                int ambient_cells, Exec exec = Exec::Parallel);

// Same identity in the horizontal layer R^{m1} with planes drawn from the
// isometry orbit of the reference horizontal k-subalgebra.
CroftonReport htype_crofton_horizontal(const AlgebraPtr& alg, int k,
                                       const std::function<double(const Eigen::VectorXd&)>& f,
                                       double radius, int samples, std::uint64_t seed,
                                       double plane_step, int ambient_cells,
                                       Exec exec = Exec::Parallel);

// Vertical signature (k_h, k_v) over the orbit of the reference subalgebra;
// requires a separable integrand f(x, t) = f_h(x) f_v(t), whose subgroup and
// ambient integrals both factor. Weights: |x|^{k_h - m1} |t|^{k_v - m2}.
CroftonReport htype_crofton_vertical(const AlgebraPtr& alg, int k_h, int k_v,
                                     const std::function<double(const Eigen::VectorXd&)>& f_h,
                                     const std::function<double(const Eigen::VectorXd&)>& f_v,
                                     double radius, int samples, std::uint64_t seed, double step,
                                     int ambient_cells, Exec exec = Exec::Parallel);

enum class ShapeKind { Euclidean, Horizontal, Vertical };

struct CorollaryConfig {
  ShapeKind shape = ShapeKind::Euclidean;
  AlgebraPtr alg;  // unused for Euclidean
  int n = 2;       // Euclidean ambient dim
  int k = 1;       // plane dim (Euclidean / horizontal shapes)
  int k_h = 0, k_v = 0;
  double p = 2.0;
  std::vector<int> resolutions;   // ambient cells per dim, one ladder level each
  std::vector<int> plane_counts;  // subspace samples per level (nested, same seed)
  std::uint64_t seed = 1;
  double decay_ratio = 0.8;  // per-step bound for a "decreasing" verdict
  double total_decay = 0.6;  // first-to-last bound for "decreasing"
  double variation = 0.2;    // relative spread for a "bounded" verdict
  double tol = 1e-8;
  int max_sweeps = 40000;
};

struct CorollaryReport {
  std::vector<double> values;
  std::vector<bool> converged;
  std::vector<double> kkt;
  bool holder_finite = false;  // singular Hoelder integral of the weight is finite
  std::string trend;           // "decreasing" | "bounded" | "mixed"
  bool consistent = false;     // infinite Hoelder bound <=> vanishing trend
};

// Refines the discrete modulus of the sampled subspace family and compares
// the trend against the Hoelder-bound dichotomy (finite exactly when the
// weight exponents clear the layer dimensions: p k > n, resp. p k_h > m1 and
// p k_v > m2).
CorollaryReport corollary_experiment(const CorollaryConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace carnot
