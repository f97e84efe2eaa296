#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "carnot/witness.hpp"
#include "doctest.h"

using namespace carnot;

TEST_CASE("problem validation") {
  ModulusProblem prob;
  prob.p = 0.5;
  prob.mass = {1.0};
  prob.rows = {{{0, 1.0}}};
  try {
    prob.validate();
    CHECK_MESSAGE(false, "p < 1 must be rejected");
  } catch (const std::invalid_argument& err) {
    CHECK(std::string(err.what()).find("witness") != std::string::npos);
  }
  prob.p = 2.0;
  CHECK_NOTHROW(prob.validate());
  prob.mass = {-1.0};
  CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
  prob.mass = {1.0};
  prob.rows = {{{3, 1.0}}};
  CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
}

TEST_CASE("two disjoint single-cell measures cost one each") {
  for (double p : {1.0, 2.0, 3.0}) {
    ModulusProblem prob;
    prob.p = p;
    prob.mass = {1.0, 1.0};
    prob.rows = {{{0, 1.0}}, {{1, 1.0}}};
    const auto sol = solve_modulus(prob);
    CHECK(sol.converged);
    CHECK(!sol.infinite);
    CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(sol.kkt_residual < 1e-8);
    const auto adm = check_admissible(prob, sol.density, 1e-7);
    CHECK(adm.admissible);
  }
}

TEST_CASE("a shared cell serves every measure at once") {
  ModulusProblem prob;
  prob.p = 2.0;
  prob.mass = {1.0, 1.0, 1.0};
  prob.rows = {{{2, 1.0}}, {{2, 1.0}}};
  const auto sol = solve_modulus(prob);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("annulus radial family against the classical value") {
  // continuum: 2 pi / ln 2
  const double oracle = 9.064720283654388;
  const auto prob = annulus_radial_problem(128, 64, 2.0);
  const auto sol = solve_modulus(prob, 1e-10, 40000);
  CHECK(sol.converged);
  CHECK(sol.kkt_residual < 1e-9);
  CHECK(sol.value == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(check_admissible(prob, sol.density, 1e-9).admissible);
}

TEST_CASE("annulus at p = 3 matches the Euler-Lagrange value") {
  // radial extremal rho = c r^{-1/2} gives pi (3 + 2 sqrt 2) / 2
  const double oracle = std::numbers::pi * (3.0 + 2.0 * std::sqrt(2.0)) / 2.0;
  const auto sol = solve_modulus(annulus_radial_problem(128, 48, 3.0), 1e-9, 40000);
  CHECK(sol.converged);
  CHECK(sol.value == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("annulus at p = 1 concentrates on the cheapest shell") {
  // optimal density lives on the innermost shell: value 2 pi (1 + dr / 2)
  const int shells = 64;
  const double dr = 1.0 / shells;
  const auto sol = solve_modulus(annulus_radial_problem(shells, 32, 1.0));
  CHECK(sol.converged);
  CHECK(sol.value ==
        doctest::Approx(2.0 * std::numbers::pi * (1.0 + dr / 2.0)).epsilon(1e-9));
}

TEST_CASE("p = 2 fast path agrees with the general exponent path") {
  const auto prob2 = annulus_radial_problem(32, 16, 2.0);
  auto prob2eps = prob2;
  prob2eps.p = 2.0 + 1e-9;
  const auto a = solve_modulus(prob2, 1e-11, 40000);
  const auto b = solve_modulus(prob2eps, 1e-11, 40000);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-6));
}

TEST_CASE("disk diameter family shrinks with the inner cutoff") {
  // continuum radial value pi / (2 ln(1/eps))
  const auto s2 = solve_modulus(disk_diameter_problem(48, 64, 1e-2, 2.0), 1e-10, 40000);
  CHECK(s2.converged);
  CHECK(s2.value ==
        doctest::Approx(std::numbers::pi / (2.0 * std::log(100.0))).epsilon(0.02));
  const auto s4 = solve_modulus(disk_diameter_problem(96, 64, 1e-4, 2.0), 1e-10, 40000);
  // squaring the cutoff halves the modulus
  CHECK(s4.value / s2.value == doctest::Approx(0.5).epsilon(0.035));
}

TEST_CASE("zero-mass cells are free and can satisfy rows alone") {
  ModulusProblem prob;
  prob.p = 2.0;
  prob.mass = {0.0, 1.0};
  prob.rows = {{{0, 2.0}, {1, 1.0}}};
  const auto sol = solve_modulus(prob);
  CHECK(!sol.infinite);
  CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.density[0] == doctest::Approx(0.5).epsilon(1e-12));  // 1 / weight
}

TEST_CASE("a measure nothing can pay for is infinite") {
  ModulusProblem prob;
  prob.p = 2.0;
  prob.mass = {1.0};
  prob.rows = {{}};
  const auto sol = solve_modulus(prob);
  CHECK(sol.infinite);
}

TEST_CASE("simplex picks the cheap shared cell at p = 1") {
  ModulusProblem prob;
  prob.p = 1.0;
  prob.mass = {2.0, 3.0, 1.0};
  prob.rows = {{{0, 1.0}, {2, 1.0}}, {{1, 1.0}, {2, 1.0}}};
  const auto sol = solve_modulus(prob);
  CHECK(sol.converged);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(check_admissible(prob, sol.density, 1e-9).admissible);
}

TEST_CASE("plane family rows carry the segment length") {
  std::vector<Eigen::MatrixXd> planes;
  Eigen::MatrixXd e1(2, 1), diag(2, 1);
  e1 << 1, 0;
  diag << std::sqrt(0.5), std::sqrt(0.5);
  planes.push_back(e1);
  planes.push_back(diag);
  const auto prob = plane_family_problem(2, 1, 16, planes, 2.0);
  CHECK(prob.rows.size() == 2);
  CHECK(prob.mass.size() == 256);
  for (const auto& row : prob.rows) {
    double len = 0.0;
    for (const auto& [i, w] : row) len += w;
    CHECK(len == doctest::Approx(2.0).epsilon(0.05));  // chord length of the unit disk
  }
  const auto sol = solve_modulus(prob);
  CHECK(sol.converged);
  CHECK(sol.value > 0.0);
  CHECK(sol.value < 10.0);
}

TEST_CASE("duality gap is certified small") {
  const auto sol = solve_modulus(annulus_radial_problem(64, 32, 2.5), 1e-10, 40000);
  CHECK(sol.converged);
  CHECK(sol.duality_gap < 1e-8);
}
