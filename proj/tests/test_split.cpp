#include <cmath>

#include "carnot/rng.hpp"
#include "carnot/split.hpp"
#include "doctest.h"

using namespace carnot;

namespace {

GroupPoint pt(const AlgebraPtr& alg, std::initializer_list<double> coords) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double x : coords) c[i++] = x;
  return GroupPoint(alg, c);
}

}  // namespace

TEST_CASE("decomposition worked examples") {
  const auto alg = make_real_heisenberg(1);
  const GroupPoint g = pt(alg, {1, 1, 1});

  // M = span{X, eps}, H = span{Y}
  const HomogeneousSplit vertical_m(alg, {0}, {0});
  const auto [m1, h1] = decompose(g, vertical_m);
  CHECK((m1.c - Eigen::Vector3d(1, 0, 0.5)).norm() < 1e-14);
  CHECK((h1.c - Eigen::Vector3d(0, 1, 0)).norm() < 1e-14);

  // M = span{X}, H = span{Y, eps}
  const HomogeneousSplit horizontal_m(alg, {0}, {});
  const auto [m2, h2] = decompose(g, horizontal_m);
  CHECK((m2.c - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14);
  CHECK((h2.c - Eigen::Vector3d(0, 1, 0.5)).norm() < 1e-14);
}

TEST_CASE("decompose recomposes on random points") {
  Rng rng(41);
  const auto hr = make_real_heisenberg(1);
  const auto hc = make_complex_heisenberg(1);
  struct Case {
    AlgebraPtr alg;
    HomogeneousSplit split;
  };
  const Case cases[] = {
      {hr, HomogeneousSplit(hr, {0}, {0})},
      {hr, HomogeneousSplit(hr, {1}, {})},
      {hc, HomogeneousSplit(hc, {0, 3}, {0})},   // {X1, X4, eps1}; complement closed
      {hc, HomogeneousSplit(hc, {1, 2}, {0, 1})},
  };
  for (const auto& [alg, split] : cases) {
    CHECK(split.dim_m() + split.dim_h() == alg->dim());
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd c(alg->dim());
      for (int i = 0; i < alg->dim(); ++i) c[i] = rng.uniform(-2.0, 2.0);
      const GroupPoint g(alg, c);
      const auto [m, h] = decompose(g, split);
      CHECK((multiply(m, h).c - g.c).norm() < 1e-12);
      CHECK((project_m(g, split).c - m.c).norm() == 0.0);
      CHECK((project_h(g, split).c - h.c).norm() == 0.0);
      // m stays in M, h stays in H
      CHECK((split.point_from_m(split.m_coords(m)).c - m.c).norm() < 1e-13);
      CHECK((split.point_from_h(split.h_coords(h)).c - h.c).norm() < 1e-13);
    }
  }
}

TEST_CASE("closure validation rejects non-subalgebra factors") {
  const auto alg = make_real_heisenberg(1);
  // M = span{X, Y} is not closed: [X, Y] = eps is not in M
  CHECK_THROWS_AS(HomogeneousSplit(alg, {0, 1}, {}), std::invalid_argument);
  // H = span{X, Y} as a complement is equally bad
  CHECK_THROWS_AS(HomogeneousSplit(alg, {}, {0}), std::invalid_argument);
  const auto hc = make_complex_heisenberg(1);
  // M = span{X1, X2} has [X1, X2] = eps1 outside
  CHECK_THROWS_AS(HomogeneousSplit(hc, {0, 1}, {}), std::invalid_argument);
}

TEST_CASE("cones around H") {
  const auto alg = make_real_heisenberg(1);
  const HomogeneousSplit split(alg, {0}, {0});
  const Norm nrm = Norm::max_homog(1.0, 1.0);
  const GroupPoint e = identity_point(alg);
  // points on H lie inside every cone, points on M outside every proper cone
  CHECK(cone_contains(split, e, 0.5, pt(alg, {0, 1, 0}), nrm));
  CHECK(!cone_contains(split, e, 10.0, pt(alg, {1, 0, 0}), nrm));
  // translation invariance: shift vertex and point together
  const GroupPoint v = pt(alg, {0.3, -0.7, 0.2});
  CHECK(cone_contains(split, v, 0.5, multiply(v, pt(alg, {0, 1, 0})), nrm));
}

TEST_CASE("grid spec indexing") {
  GridSpec grid;
  grid.lo = Eigen::Vector2d(-1, -1);
  grid.hi = Eigen::Vector2d(1, 1);
  grid.step = Eigen::Vector2d(0.5, 0.5);
  CHECK(grid.counts() == std::vector<int>{4, 4});
  CHECK(grid.total() == 16);
  CHECK((grid.center({0, 0}) - Eigen::Vector2d(-0.75, -0.75)).norm() < 1e-15);
  CHECK((grid.center({3, 1}) - Eigen::Vector2d(0.75, -0.25)).norm() < 1e-15);
}

TEST_CASE("graph points enumerate the grid") {
  const auto alg = make_real_heisenberg(1);
  IntrinsicGraph graph{HomogeneousSplit(alg, {0}, {0}), GridSpec{}, graph_f_zero(1), 0.0};
  graph.grid.lo = Eigen::Vector2d(-1, -1);
  graph.grid.hi = Eigen::Vector2d(1, 1);
  graph.grid.step = Eigen::Vector2d(0.25, 0.25);
  const auto pts = graph_points(graph, 100000);
  CHECK(pts.size() == 64);
  // zero graph over M: every point has vanishing Y part
  for (const auto& c : pts) CHECK(c[1] == 0.0);
  const auto sub = graph_points(graph, 10);
  CHECK(sub.size() <= 10);
  CHECK(sub.size() >= 5);
}

TEST_CASE("cone verification separates honest and dishonest Lipschitz claims") {
  const auto alg = make_real_heisenberg(1);
  const HomogeneousSplit split(alg, {0}, {0});
  IntrinsicGraph graph{split, GridSpec{}, graph_f_zero(1), 0.5};
  graph.grid.lo = Eigen::Vector2d(-1, -0.5);
  graph.grid.hi = Eigen::Vector2d(1, 0.5);
  graph.grid.step = Eigen::Vector2d(0.1, 0.1);
  Eigen::MatrixXd b(1, 2);
  b << 0.5, 0.0;  // f(x, t) = x / 2
  graph.f = graph_f_linear(b);
  const Norm nrm = Norm::max_homog(1.0, 1.0);

  const auto good = verify_cone(graph, 2.0, nrm, Exec::Parallel);
  CHECK(good.ok);
  const auto bad = verify_cone(graph, 0.01, nrm, Exec::Parallel);
  CHECK(!bad.ok);
  CHECK(bad.pairs > 0);
}

TEST_CASE("c0 constant of the Euclidean model split") {
  // abelian R^2 split into the two axes: min ||m + h|| over ||m|| + ||h|| = 1
  // is attained at m = h = 1/2 and equals 1/sqrt(2)
  const auto ab = make_abelian(2);
  const HomogeneousSplit split(ab, {0}, {});
  const auto rep = c0_estimate(split, Norm::max_homog(1.0, 1.0), 200000, 99);
  CHECK(rep.c0 >= 0.70710678118 - 1e-9);
  CHECK(rep.c0 <= 0.7075);
}

TEST_CASE("c0 constant of the Heisenberg splits is positive and below one") {
  const auto alg = make_real_heisenberg(1);
  for (const auto& split : {HomogeneousSplit(alg, {0}, {0}), HomogeneousSplit(alg, {0}, {})}) {
    const auto rep = c0_estimate(split, Norm::max_homog(1.0, 1.0), 100000, 7);
    CHECK(rep.c0 > 0.3);
    CHECK(rep.c0 < 0.75);
    // the reported minimizer reproduces the reported value
    const GroupPoint m = split.point_from_m(rep.worst_m);
    const GroupPoint h = split.point_from_h(rep.worst_h);
    const double s = norm(m, Norm::max_homog(1.0, 1.0)) + norm(h, Norm::max_homog(1.0, 1.0));
    CHECK(std::abs(s - 1.0) < 1e-9);
    CHECK(norm(multiply(m, h), Norm::max_homog(1.0, 1.0)) ==
          doctest::Approx(rep.c0).epsilon(1e-12));
  }
}
