#include <sstream>

#include "carnot/serialize.hpp"
#include "doctest.h"

using namespace carnot;

TEST_CASE("algebras of every kind round-trip") {
  Eigen::MatrixXd j(2, 2);
  j << 0, 1, -1, 0;
  const std::vector<AlgebraPtr> algs = {
      make_real_heisenberg(2), make_complex_heisenberg(1), make_quaternion_heisenberg(1),
      make_abelian(3),
      std::make_shared<const HTypeAlgebra>(HTypeAlgebra::generic_step2({j}))};
  for (const auto& alg : algs) {
    const auto back = algebra_from_json(to_json(alg));
    CHECK(alg->same_structure(*back));
    CHECK(back->dim() == alg->dim());
    CHECK(back->homogeneous_dim() == alg->homogeneous_dim());
  }
}

TEST_CASE("norms round-trip with their scales") {
  const Norm mh = Norm::max_homog(0.7, 1.3);
  const Norm back = norm_from_json(to_json(mh));
  CHECK(back.kind == NormKind::MaxHomog);
  CHECK(back.eps1 == 0.7);
  CHECK(back.eps2 == 1.3);

  const Norm cy = norm_from_json(to_json(Norm::cygan()));
  CHECK(cy.kind == NormKind::CyganGauge);
}

TEST_CASE("splits and grids round-trip") {
  const auto alg = make_complex_heisenberg(1);
  const HomogeneousSplit split(alg, {1, 2}, {0, 1});
  const auto back = split_from_json(alg, to_json(split));
  CHECK(back.m_horizontal() == split.m_horizontal());
  CHECK(back.m_vertical() == split.m_vertical());

  GridSpec grid;
  grid.lo = Eigen::Vector2d(-1, -2);
  grid.hi = Eigen::Vector2d(1, 2);
  grid.step = Eigen::Vector2d(0.5, 0.25);
  const auto g2 = grid_from_json(to_json(grid));
  CHECK((g2.lo - grid.lo).norm() == 0.0);
  CHECK((g2.hi - grid.hi).norm() == 0.0);
  CHECK((g2.step - grid.step).norm() == 0.0);
  CHECK(g2.total() == grid.total());
}

TEST_CASE("modulus problems round-trip and solve identically") {
  const auto prob = annulus_radial_problem(8, 4, 2.5);
  const auto back = problem_from_json(to_json(prob));
  CHECK(back.p == prob.p);
  CHECK(back.mass == prob.mass);
  REQUIRE(back.rows.size() == prob.rows.size());
  for (std::size_t r = 0; r < prob.rows.size(); ++r) CHECK(back.rows[r] == prob.rows[r]);
  CHECK(solve_modulus(back).value == solve_modulus(prob).value);
}

TEST_CASE("solution serialization controls density inclusion") {
  ModulusProblem prob;
  prob.p = 2.0;
  prob.mass = {1.0, 1.0};
  prob.rows = {{{0, 1.0}}, {{1, 1.0}}};
  const auto sol = solve_modulus(prob);

  const Json lean = to_json(sol);
  CHECK(lean.contains("value"));
  CHECK(lean.contains("kkt_residual"));
  CHECK(lean.contains("converged"));
  CHECK(!lean.contains("density"));

  const Json full = to_json(sol, true);
  REQUIRE(full.contains("density"));
  CHECK(full["density"].size() == 2);
}

TEST_CASE("reports expose their headline fields") {
  RefinementReport ref;
  ref.values = {2.0, 1.0};
  ref.infinite = {false, false};
  ref.converged = {true, true};
  ref.kkt = {1e-10, 1e-10};
  ref.verdict = Verdict::Exceptional;
  const Json j = to_json(ref);
  CHECK(j["verdict"] == "exceptional");
  CHECK(j["values"].size() == 2);

  CroftonReport cr;
  cr.ratio = 0.5;
  cr.expected = 0.5;
  const Json jc = to_json(cr);
  CHECK(jc.contains("ratio"));
  CHECK(jc.contains("expected"));
  CHECK(jc.contains("mc_se"));
}

TEST_CASE("csv writer formats a plain numeric table") {
  std::ostringstream os;
  write_csv(os, {"a", "b"}, {{1.0, 2.0}, {0.5, -3.25}});
  CHECK(os.str() == "a,b\n1,2\n0.5,-3.25\n");
}
