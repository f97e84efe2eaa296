#pragma once

#include <vector>

#include "carnot/parallel.hpp"

namespace carnot {

// Discrete p-modulus program over a cell complex:
//   minimize  sum_i mass_i f_i^p
//   s.t.      sum_i row_j[i] f_i >= 1   for every measure j,   f >= 0.
// Rows are sparse (cell index, weight) lists with nonnegative weights.
struct ModulusProblem {
  double p = 2.0;
  std::vector<double> mass;
  std::vector<std::vector<std::pair<int, double>>> rows;

  void validate() const;
};

struct ModulusSolution {
  double value = 0.0;
  bool infinite = false;  // some measure only charges zero-mass cells it cannot reach
  std::vector<double> density;
  std::vector<double> duals;
  double kkt_residual = 0.0;  // max of feasibility, complementary slackness, gap
  double duality_gap = 0.0;   // normalized |primal - dual|
  int sweeps = 0;
  bool converged = false;
};

// p > 1: dual coordinate ascent with per-row exact (p = 2) or safeguarded
// Newton line solves; p = 1: two-phase revised simplex. p < 1 is rejected
// (no convex program; exceptionality is certified by witnesses instead).
ModulusSolution solve_modulus(const ModulusProblem& prob, double tol = 1e-9, int max_sweeps = 20000,
                              Exec exec = Exec::Parallel);

struct AdmissibilityReport {
  bool admissible = false;
  double min_integral = 0.0;
  int worst_row = -1;
};

AdmissibilityReport check_admissible(const ModulusProblem& prob, const std::vector<double>& f,
                                     double tol = 1e-9);

// energy sum_i mass_i f_i^p of an explicit density
double modulus_energy(const ModulusProblem& prob, const std::vector<double>& f,
                      Exec exec = Exec::Serial);

}  // namespace carnot
