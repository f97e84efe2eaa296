#include <cmath>
#include <numbers>

#include "carnot/rng.hpp"
#include "carnot/witness.hpp"
#include "doctest.h"

using namespace carnot;

namespace {

Eigen::Vector3d pt(double x, double y, double t) { return Eigen::Vector3d(x, y, t); }

}  // namespace

TEST_CASE("radial power witness evaluates the gauge power") {
  const auto alg = make_real_heisenberg(1);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  const auto w = WitnessFunction::radial_pow(alg, 1.0, nrm);
  CHECK(w.space_dim() == 3);
  CHECK(w.eval(pt(0.5, 0, 0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(w.eval(pt(0, 0, 0.09)) == doctest::Approx(1.0 / 0.3).epsilon(1e-12));
  CHECK(w.eval(pt(1.0, 0, 0)) == 0.0);   // support is the open unit ball
  CHECK(w.eval(pt(3.0, 0, 0)) == 0.0);
  CHECK(std::isinf(w.eval(pt(0, 0, 0))));
  CHECK(w.singular_distance(pt(0.5, 0, 0)) == doctest::Approx(0.5).epsilon(1e-12));

  const auto w2 = WitnessFunction::radial_pow(alg, 2.0, nrm);
  CHECK(w2.eval(pt(0.5, 0, 0)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("radial log witness carries the logarithmic correction") {
  const auto alg = make_real_heisenberg(1);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  const auto w = WitnessFunction::radial_log(alg, 1.0, 0.75, nrm);
  const double expect = 2.0 * std::pow(std::log(4.0), -0.75);
  CHECK(w.eval(pt(0.5, 0, 0)) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(w.eval(pt(1.5, 0, 0)) == 0.0);
  CHECK(std::isinf(w.eval(pt(0, 0, 0))));
}

TEST_CASE("vitali witness covers its box and dies off away from it") {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0, 0;
  hi << 1, 1;
  const auto w = WitnessFunction::vitali_phi(2, 0.2, lo, hi);
  CHECK(w.space_dim() == 2);
  CHECK(!w.vitali_centers().empty());

  // every point of the box lies within r of some center
  Rng rng(17);
  for (int s = 0; s < 200; ++s) {
    Eigen::VectorXd z(2);
    z << rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0);
    CHECK(w.singular_distance(z) <= 0.2 + 1e-12);
  }

  // infinite exactly on the lattice, positive nearby, zero far away
  for (const auto& c : w.vitali_centers()) CHECK(std::isinf(w.eval(c)));
  Eigen::VectorXd near = w.vitali_centers().front();
  near[0] += 0.05;
  CHECK(w.eval(near) > 0.0);
  CHECK(std::isfinite(w.eval(near)));
  Eigen::VectorXd far(2);
  far << 10, 10;
  CHECK(w.eval(far) == 0.0);
}

TEST_CASE("split composite sums the part witnesses on M-components") {
  const auto alg = make_real_heisenberg(1);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  const HomogeneousSplit sx(alg, {0}, {}), sxt(alg, {0}, {0});
  // parts live on the M-subspaces: the 1-d horizontal line, and the graded
  // 2-d slab spanned by X and the center (abelian, one direction per layer)
  const auto line = make_abelian(1);
  const auto slab =
      std::make_shared<const HTypeAlgebra>(HTypeAlgebra::generic_step2({Eigen::MatrixXd::Zero(1, 1)}));
  const auto wx = WitnessFunction::radial_pow(line, 1.0, nrm);
  const auto wxt = WitnessFunction::radial_pow(slab, 2.0, nrm);
  const auto comp = WitnessFunction::split_composite({{sx, wx}, {sxt, wxt}});
  CHECK(comp.space_dim() == 3);

  Rng rng(5);
  for (int s = 0; s < 40; ++s) {
    Eigen::VectorXd c(3);
    c << rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3);
    // closed forms: M-component of (x,y,t) is x for M = <X>, and
    // (x, t - xy/2) for M = <X, eps>
    const double nx = std::abs(c[0]);
    const double p1 = nx >= 1.0 ? 0.0 : 1.0 / nx;
    const double nxt = std::max(nx, std::sqrt(std::abs(c[2] - 0.5 * c[0] * c[1])));
    const double p2 = nxt >= 1.0 ? 0.0 : 1.0 / (nxt * nxt);
    const double manual = p1 + p2;
    const double got = comp.eval(c);
    if (std::isinf(manual)) {
      CHECK(std::isinf(got));
    } else {
      CHECK(got == doctest::Approx(manual).epsilon(1e-12));
    }
  }
}

TEST_CASE("L^p estimate converges for an integrable power and not for the critical one") {
  const auto alg = make_real_heisenberg(1);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -1.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(3, 1.0);

  // dm p = 2 < Q = 4: the p-energy integral is finite
  const auto fine = lp_norm_estimate(WitnessFunction::radial_pow(alg, 1.0, nrm), 2.0, lo, hi,
                                     0.1, 0.1, 3);
  REQUIRE(fine.values.size() == 3);
  for (double v : fine.values) CHECK(v > 0.0);
  CHECK(fine.converging);
  CHECK(fine.rel_changes.back() < 0.1);

  // dm p = Q: the integral piles up a fresh log every halving of the core
  const auto crit = lp_norm_estimate(WitnessFunction::radial_pow(alg, 2.0, nrm), 2.0, lo, hi,
                                     0.1, 0.1, 3);
  CHECK(!crit.converging);
  CHECK(crit.values[1] > crit.values[0] * 1.15);
  CHECK(crit.values[2] > crit.values[1] * 1.1);

  // critical power with alpha p > 1 log damping is summable again
  const auto logged = lp_norm_estimate(WitnessFunction::radial_log(alg, 2.0, 0.75, nrm), 2.0,
                                       lo, hi, 0.1, 0.1, 3);
  CHECK(logged.rel_changes.back() < 0.1);
}

namespace {

IntrinsicGraph horizontal_line_graph(const AlgebraPtr& alg, double step) {
  IntrinsicGraph graph{HomogeneousSplit(alg, {0}, {}), GridSpec{}, graph_f_zero(2), 0.0};
  graph.grid.lo = Eigen::VectorXd::Constant(1, -1.0);
  graph.grid.hi = Eigen::VectorXd::Constant(1, 1.0);
  graph.grid.step = Eigen::VectorXd::Constant(1, step);
  return graph;
}

}  // namespace

TEST_CASE("surface divergence check separates matching and mismatched powers") {
  const auto alg = make_real_heisenberg(1);
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  const auto graph = horizontal_line_graph(alg, 0.001);

  // witness power equal to the surface dimension: ring sums stay level
  const auto hot = surface_divergence_check(graph, WitnessFunction::radial_pow(alg, 1.0, nrm),
                                            1, 6, 4, nrm);
  REQUIRE(hot.ring_sums.size() == 6);
  for (double s : hot.ring_sums) CHECK(s > 0.0);
  CHECK(hot.max_min_ratio <= 10.0);
  CHECK(hot.beta < 1.0);
  CHECK(hot.diverging);
  CHECK(hot.confident);

  // weaker power: ring sums decay geometrically, series summable
  const auto cold = surface_divergence_check(graph, WitnessFunction::radial_pow(alg, 0.5, nrm),
                                             1, 6, 4, nrm);
  CHECK(!cold.diverging);
  CHECK(cold.beta > 1.0);
}

TEST_CASE("refinement ladders classify into the four verdicts") {
  // shrinking inner cutoff: modulus ~ pi / (2 log(1/eps)) halves per level
  const std::vector<ModulusProblem> shrink = {disk_diameter_problem(64, 32, 1e-2, 2.0),
                                              disk_diameter_problem(128, 32, 1e-4, 2.0),
                                              disk_diameter_problem(256, 32, 1e-8, 2.0)};
  const auto exc = fuglede_refinement_study(shrink, 0.7, 0.2, 1e-9, 40000);
  CHECK(exc.verdict == Verdict::Exceptional);
  for (std::size_t i = 0; i + 1 < exc.values.size(); ++i)
    CHECK(exc.values[i + 1] < 0.6 * exc.values[i]);

  // pure grid refinement of a fixed annulus: value locked at 2 pi / log 2
  const std::vector<ModulusProblem> stable = {annulus_radial_problem(32, 16, 2.0),
                                              annulus_radial_problem(64, 16, 2.0),
                                              annulus_radial_problem(128, 16, 2.0)};
  const auto non = fuglede_refinement_study(stable, 0.7, 0.2, 1e-9, 40000);
  CHECK(non.verdict == Verdict::NonExceptional);

  ModulusProblem impossible;
  impossible.p = 2.0;
  impossible.mass = {1.0};
  impossible.rows = {{}};
  const auto inf = fuglede_refinement_study({impossible, impossible});
  CHECK(inf.verdict == Verdict::Infinite);

  ModulusProblem easy;
  easy.p = 2.0;
  easy.mass = {1.0};
  easy.rows = {{{0, 1.0}}};
  const auto mixed = fuglede_refinement_study({impossible, easy});
  CHECK(mixed.verdict == Verdict::Inconclusive);
}
