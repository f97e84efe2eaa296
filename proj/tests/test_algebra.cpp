#include <Eigen/Dense>

#include "carnot/algebra.hpp"
#include "carnot/rng.hpp"
#include "doctest.h"

using namespace carnot;

namespace {

Eigen::VectorXd unit(int dim, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v[i] = 1.0;
  return v;
}

Eigen::VectorXd random_vec(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.gaussian();
  return v;
}

}  // namespace

TEST_CASE("real Heisenberg bracket table") {
  const auto alg = make_real_heisenberg(1);
  CHECK(alg->m1() == 2);
  CHECK(alg->m2() == 1);
  CHECK(alg->homogeneous_dim() == 4);
  // [X, Y] = eps, [Y, X] = -eps, [X, X] = [Y, Y] = 0
  CHECK(alg->bracket(unit(2, 0), unit(2, 1))[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(alg->bracket(unit(2, 1), unit(2, 0))[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(alg->bracket(unit(2, 0), unit(2, 0))[0] == 0.0);
  Eigen::Matrix2d j;
  j << 0, -1, 1, 0;
  CHECK((alg->j_matrix(0) - j).norm() == 0.0);
}

TEST_CASE("complex Heisenberg bracket table") {
  const auto alg = make_complex_heisenberg(1);
  CHECK(alg->m1() == 4);
  CHECK(alg->m2() == 2);
  const auto br = [&](int a, int b) { return alg->bracket(unit(4, a), unit(4, b)); };
  // slot frame (X1, X2, X3, X4); centers (eps1, eps2)
  CHECK((br(0, 1) - Eigen::Vector2d(1, 0)).norm() < 1e-14);   // [X1,X2] = eps1
  CHECK((br(2, 3) - Eigen::Vector2d(-1, 0)).norm() < 1e-14);  // [X3,X4] = -eps1
  CHECK((br(0, 2) - Eigen::Vector2d(0, 1)).norm() < 1e-14);   // [X1,X3] = eps2
  CHECK((br(1, 3) - Eigen::Vector2d(0, 1)).norm() < 1e-14);   // [X2,X4] = eps2
  CHECK(br(0, 3).norm() < 1e-14);                             // [X1,X4] = 0
  CHECK(br(1, 2).norm() < 1e-14);                             // [X2,X3] = 0
}

TEST_CASE("quaternion Heisenberg bracket table") {
  const auto alg = make_quaternion_heisenberg(1);
  CHECK(alg->m1() == 4);
  CHECK(alg->m2() == 3);
  CHECK(alg->homogeneous_dim() == 10);
  const auto br = [&](int a, int b) { return alg->bracket(unit(4, a), unit(4, b)); };
  CHECK((br(0, 1) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14);   // [X1,X2] = eps1
  CHECK((br(2, 3) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-14);  // [X3,X4] = -eps1
  CHECK((br(0, 2) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-14);   // [X1,X3] = eps2
  CHECK((br(1, 3) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-14);   // [X2,X4] = eps2
  CHECK((br(0, 3) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);   // [X1,X4] = eps3
  CHECK((br(1, 2) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-14);  // [X2,X3] = -eps3
}

TEST_CASE("complex structures compose with quaternion orientation") {
  const auto alg = make_quaternion_heisenberg(1);
  const Eigen::MatrixXd j1 = alg->j_matrix(0);
  const Eigen::MatrixXd j2 = alg->j_matrix(1);
  const Eigen::MatrixXd j3 = alg->j_matrix(2);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  // applying J1 then J2 then J3 is multiplication by i j k = -1
  CHECK((j3 * j2 * j1 + id).norm() < 1e-14);
  CHECK((j1 * j2 * j3 - id).norm() < 1e-14);
}

TEST_CASE("H-type identities on random triples") {
  Rng rng(7);
  for (const auto& alg :
       {make_real_heisenberg(2), make_complex_heisenberg(2), make_quaternion_heisenberg(2)}) {
    const int m1 = alg->m1(), m2 = alg->m2();
    for (int a = 0; a < m2; ++a) {
      const Eigen::MatrixXd& j = alg->j_matrix(a);
      CHECK((j + j.transpose()).norm() < 1e-12);                           // skew
      CHECK((j.transpose() * j - Eigen::MatrixXd::Identity(m1, m1)).norm() < 1e-12);
      for (int b = a + 1; b < m2; ++b) {
        const Eigen::MatrixXd& jb = alg->j_matrix(b);
        CHECK((j * jb + jb * j).norm() < 1e-12);  // anticommute
      }
    }
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::VectorXd u = random_vec(rng, m1);
      const Eigen::VectorXd v = random_vec(rng, m1);
      const Eigen::VectorXd z = random_vec(rng, m2);
      // <J_z u, v> = <z, [u, v]>
      const double lhs = (alg->j_of(z) * u).dot(v);
      const double rhs = z.dot(alg->bracket(u, v));
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
      // J_z^2 = -|z|^2 Id
      const Eigen::MatrixXd jz = alg->j_of(z);
      CHECK((jz * jz + z.squaredNorm() * Eigen::MatrixXd::Identity(m1, m1)).norm() <
            1e-12 * (1.0 + z.squaredNorm()) * m1);
    }
  }
}

TEST_CASE("multi-slot algebras act blockwise") {
  const auto alg = make_complex_heisenberg(2);
  CHECK(alg->m1() == 8);
  // cross-slot brackets vanish
  CHECK(alg->bracket(unit(8, 0), unit(8, 5)).norm() < 1e-14);
  // slot 1 reproduces the slot 0 table
  CHECK((alg->bracket(unit(8, 4), unit(8, 5)) - Eigen::Vector2d(1, 0)).norm() < 1e-14);
}

TEST_CASE("structure comparison and generic construction") {
  CHECK(make_real_heisenberg(2)->same_structure(*make_real_heisenberg(2)));
  CHECK(!make_real_heisenberg(2)->same_structure(*make_real_heisenberg(3)));
  CHECK(!make_real_heisenberg(1)->same_structure(*make_complex_heisenberg(1)));

  const auto hc = make_complex_heisenberg(1);
  const auto generic = std::make_shared<const HTypeAlgebra>(
      HTypeAlgebra::generic_step2({hc->j_matrix(0), hc->j_matrix(1)}));
  CHECK(generic->kind() == AlgebraKind::GenericStep2);
  CHECK(generic->m1() == 4);
  CHECK(generic->m2() == 2);
  CHECK((generic->bracket(unit(4, 0), unit(4, 1)) - Eigen::Vector2d(1, 0)).norm() < 1e-14);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(HTypeAlgebra::generic_step2({bad}), std::invalid_argument);

  const auto ab = make_abelian(3);
  CHECK(ab->m2() == 0);
  CHECK(ab->homogeneous_dim() == 3);
}

TEST_CASE("group point validation") {
  const auto alg = make_real_heisenberg(1);
  CHECK_THROWS_AS(GroupPoint(alg, Eigen::VectorXd::Zero(2)), std::invalid_argument);
  const GroupPoint e = identity_point(alg);
  CHECK(e.horizontal().norm() == 0.0);
  CHECK(e.vertical().norm() == 0.0);
}
