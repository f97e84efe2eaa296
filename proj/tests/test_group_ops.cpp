#include <cmath>

#include "carnot/group_ops.hpp"
#include "carnot/rng.hpp"
#include "doctest.h"

using namespace carnot;

namespace {

GroupPoint pt(const AlgebraPtr& alg, std::initializer_list<double> coords) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double x : coords) c[i++] = x;
  return GroupPoint(alg, c);
}

GroupPoint random_point(const AlgebraPtr& alg, Rng& rng) {
  Eigen::VectorXd c(alg->dim());
  for (int i = 0; i < alg->dim(); ++i) c[i] = rng.uniform(-2.0, 2.0);
  return GroupPoint(alg, c);
}

}  // namespace

TEST_CASE("BCH product worked example") {
  const auto alg = make_real_heisenberg(1);
  const GroupPoint g = multiply(pt(alg, {1, 0, 0}), pt(alg, {0, 1, 0}));
  CHECK(g.c[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.c[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.c[2] == doctest::Approx(0.5).epsilon(1e-15));
  // reversed order flips the twist sign
  const GroupPoint h = multiply(pt(alg, {0, 1, 0}), pt(alg, {1, 0, 0}));
  CHECK(h.c[2] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("group axioms on random points") {
  Rng rng(11);
  for (const auto& alg :
       {make_real_heisenberg(1), make_complex_heisenberg(1), make_quaternion_heisenberg(2)}) {
    const GroupPoint e = identity_point(alg);
    for (int trial = 0; trial < 200; ++trial) {
      const GroupPoint a = random_point(alg, rng);
      const GroupPoint b = random_point(alg, rng);
      const GroupPoint c = random_point(alg, rng);
      CHECK((multiply(a, e).c - a.c).norm() == 0.0);
      CHECK((multiply(e, a).c - a.c).norm() == 0.0);
      CHECK(multiply(a, inverse(a)).c.norm() < 1e-14);
      CHECK(multiply(inverse(a), a).c.norm() < 1e-14);
      const GroupPoint ab_c = multiply(multiply(a, b), c);
      const GroupPoint a_bc = multiply(a, multiply(b, c));
      CHECK((ab_c.c - a_bc.c).norm() < 1e-13);
    }
  }
}

TEST_CASE("inverse is coordinate negation in step 2") {
  const auto alg = make_quaternion_heisenberg(1);
  Rng rng(3);
  const GroupPoint a = random_point(alg, rng);
  CHECK((inverse(a).c + a.c).norm() == 0.0);
}

TEST_CASE("dilations") {
  const auto alg = make_real_heisenberg(1);
  const GroupPoint d = dilate(pt(alg, {1, 1, 1}), 2.0);
  CHECK(d.c[0] == 2.0);
  CHECK(d.c[1] == 2.0);
  CHECK(d.c[2] == 4.0);
  // automorphism: delta(ab) = delta(a) delta(b)
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupPoint a = random_point(alg, rng);
    const GroupPoint b = random_point(alg, rng);
    const double lam = rng.uniform(0.1, 3.0);
    CHECK((dilate(multiply(a, b), lam).c - multiply(dilate(a, lam), dilate(b, lam)).c).norm() <
          1e-13);
  }
}

TEST_CASE("homogeneous norms") {
  const auto alg = make_real_heisenberg(1);
  const Norm mh = Norm::max_homog(1.0, 1.0);
  const Norm cy = Norm::cygan();
  CHECK(norm(pt(alg, {3, 4, 0}), mh) == doctest::Approx(5.0).epsilon(1e-15));
  // Cygan gauge of a purely vertical point: (16 t^2)^{1/4} = 2 sqrt(|t|)
  CHECK(norm(pt(alg, {0, 0, 0.25}), cy) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm(pt(alg, {0, 0, 0.25}), mh) == doctest::Approx(0.5).epsilon(1e-14));

  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const GroupPoint g = random_point(alg, rng);
    const double lam = rng.uniform(0.1, 4.0);
    for (const Norm& nrm : {mh, cy}) {
      CHECK(norm(dilate(g, lam), nrm) ==
            doctest::Approx(lam * norm(g, nrm)).epsilon(1e-12));
      CHECK(norm(inverse(g), nrm) == doctest::Approx(norm(g, nrm)).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm scales match the axis behavior") {
  const auto alg = make_complex_heisenberg(1);
  Rng rng(23);
  for (const Norm& nrm : {Norm::max_homog(0.7, 1.3), Norm::cygan()}) {
    const auto [a1, a2] = norm_scales(nrm);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(alg->dim());
      for (int i = 0; i < alg->m1(); ++i) c[i] = rng.uniform(-2.0, 2.0);
      CHECK(norm_coords(*alg, c, nrm) ==
            doctest::Approx(a1 * c.head(4).norm()).epsilon(1e-12));
      Eigen::VectorXd v = Eigen::VectorXd::Zero(alg->dim());
      for (int i = 0; i < alg->m2(); ++i) v[alg->m1() + i] = rng.uniform(-2.0, 2.0);
      CHECK(norm_coords(*alg, v, nrm) ==
            doctest::Approx(a2 * std::sqrt(v.tail(2).norm())).epsilon(1e-12));
    }
  }
}

TEST_CASE("Cygan gauge satisfies the triangle inequality") {
  const auto alg = make_quaternion_heisenberg(1);
  const Norm cy = Norm::cygan();
  Rng rng(29);
  for (int trial = 0; trial < 2000; ++trial) {
    const GroupPoint p = random_point(alg, rng);
    const GroupPoint q = random_point(alg, rng);
    const GroupPoint r = random_point(alg, rng);
    CHECK(distance(p, q, cy) <= distance(p, r, cy) + distance(r, q, cy) + 1e-12);
  }
}

TEST_CASE("distance on raw coordinates agrees with the point version") {
  const auto alg = make_complex_heisenberg(2);
  Rng rng(31);
  for (const Norm& nrm : {Norm::max_homog(1.0, 1.0), Norm::cygan()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const GroupPoint p = random_point(alg, rng);
      const GroupPoint q = random_point(alg, rng);
      CHECK(distance_coords(*alg, p.c, q.c, nrm) ==
            doctest::Approx(distance(p, q, nrm)).epsilon(1e-13));
    }
  }
}

TEST_CASE("left-invariant frame and coefficients") {
  const auto alg = make_real_heisenberg(1);
  const GroupPoint e = identity_point(alg);
  CHECK((frame(e) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupPoint g = random_point(alg, rng);
    Eigen::VectorXd v(3);
    for (int i = 0; i < 3; ++i) v[i] = rng.gaussian();
    // frame * coefficients = v
    CHECK((frame(g) * frame_coefficients(g, v) - v).norm() < 1e-12);
  }
}

TEST_CASE("horizontal lift of the circle gains the swept vertical area") {
  const auto alg = make_real_heisenberg(1);
  // unit circle through the origin with lift tau(t) = (t - sin t) / 2
  auto lifted = [](double t) {
    Eigen::VectorXd c(3);
    c << std::sin(t), 1.0 - std::cos(t), 0.5 * (t - std::sin(t));
    return c;
  };
  const auto rep = is_horizontal(alg, lifted, 0.0, 6.283185307179586, 2001, 1e-4);
  CHECK(rep.horizontal);
  CHECK(rep.max_vertical_defect < 1e-4);

  // a vertical segment is as far from horizontal as it gets
  auto vertical = [](double t) {
    Eigen::VectorXd c(3);
    c << 0.0, 0.0, t;
    return c;
  };
  const auto bad = is_horizontal(alg, vertical, 0.0, 1.0, 101, 1e-4);
  CHECK(!bad.horizontal);
  CHECK(bad.max_vertical_defect > 0.5);
}
