#include <cmath>
#include <complex>
#include <stdexcept>

#include "carnot/grassmann.hpp"
#include "carnot/group_ops.hpp"
#include "doctest.h"

using namespace carnot;

TEST_CASE("haar orthogonal: orthonormal, reproducible, sign-balanced") {
  Rng rng(42);
  for (int n : {1, 2, 4, 7}) {
    const auto q = haar_orthogonal(n, rng);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
  }

  Rng a(7), b(7);
  CHECK((haar_orthogonal(3, a) - haar_orthogonal(3, b)).norm() == 0.0);

  // O(1) is {+1, -1} with equal probability
  Rng c(11);
  int plus = 0;
  for (int s = 0; s < 2000; ++s) plus += haar_orthogonal(1, c)(0, 0) > 0.0 ? 1 : 0;
  CHECK(plus > 880);
  CHECK(plus < 1120);
}

TEST_CASE("haar orthogonal first-column moment matches 1/n") {
  // E |u_00|^2 = 1/n by exchangeability of the uniform sphere
  const int n = 4, draws = 4000;
  Rng rng(100);
  double acc = 0.0, acc2 = 0.0;
  for (int s = 0; s < draws; ++s) {
    const double u = haar_orthogonal(n, rng)(0, 0);
    acc += u * u;
    acc2 += u * u * u * u;
  }
  const double mean = acc / draws;
  const double var = acc2 / draws - mean * mean;
  const double se = std::sqrt(var / draws);
  CHECK(std::abs(mean - 0.25) < 4.0 * se);
}

TEST_CASE("haar unitary is unitary and embeds to a J-commuting orthogonal") {
  Rng rng(9);
  const auto u = haar_unitary(3, rng);
  CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-12);

  // the realified unitary commutes with the slotwise complex structure, which
  // is exactly J of the real Heisenberg algebra on R^6
  const auto alg = make_real_heisenberg(3);
  const auto r = embed_unitary(u);
  CHECK(r.rows() == 6);
  CHECK((r.transpose() * r - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
  const auto j1 = alg->j_matrix(0);
  CHECK((r * j1 - j1 * r).norm() < 1e-12);
}

TEST_CASE("symplectic embedding commutes with every right-multiplication J") {
  Rng rng(13);
  const auto alg = make_quaternion_heisenberg(2);
  const auto s = haar_symplectic_embedded(2, rng);
  CHECK(s.rows() == 8);
  CHECK((s.transpose() * s - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-12);
  for (int a = 0; a < 3; ++a) {
    const auto j = alg->j_matrix(a);
    CHECK((s * j - j * s).norm() < 1e-12);
  }
}

TEST_CASE("sampled isometries respect the structure equations") {
  Rng rng(21);
  for (const auto& alg : {make_real_heisenberg(2), make_complex_heisenberg(2),
                          make_quaternion_heisenberg(2)}) {
    for (bool refl : {false, true}) {
      for (int s = 0; s < 50; ++s) {
        const auto iso = sample_isometry(alg, rng, refl);
        const int m1 = alg->m1(), m2 = alg->m2();
        CHECK((iso.u.transpose() * iso.u - Eigen::MatrixXd::Identity(m1, m1)).norm() < 1e-12);
        CHECK((iso.v.transpose() * iso.v - Eigen::MatrixXd::Identity(m2, m2)).norm() < 1e-12);
        CHECK(isometry_compatibility_residual(alg, iso) < 1e-12);
      }
    }
  }
}

TEST_CASE("isometries act as group automorphisms") {
  Rng rng(33);
  const auto alg = make_quaternion_heisenberg(1);
  for (int s = 0; s < 20; ++s) {
    const auto iso = sample_isometry(alg, rng);
    Eigen::VectorXd ca(7), cb(7);
    for (int i = 0; i < 7; ++i) {
      ca[i] = rng.uniform(-1.0, 1.0);
      cb[i] = rng.uniform(-1.0, 1.0);
    }
    const GroupPoint ga{alg, ca}, gb{alg, cb};
    const auto lhs = apply_isometry(iso, multiply(ga, gb));
    const auto rhs = multiply(apply_isometry(iso, ga), apply_isometry(iso, gb));
    CHECK((lhs.c - rhs.c).norm() < 1e-12);
  }
}

TEST_CASE("reflection classes appear where the family has them") {
  Rng rng(55);
  const auto real = make_real_heisenberg(2);
  bool saw_flip = false, saw_keep = false;
  for (int s = 0; s < 200; ++s) {
    const auto iso = sample_isometry(real, rng, true);
    const double det = iso.v.determinant();
    CHECK(std::abs(std::abs(det) - 1.0) < 1e-12);
    (det < 0.0 ? saw_flip : saw_keep) = true;
  }
  CHECK(saw_flip);
  CHECK(saw_keep);

  // quaternion vertical rotations are always orientation preserving
  const auto quat = make_quaternion_heisenberg(1);
  for (int s = 0; s < 100; ++s) {
    const auto iso = sample_isometry(quat, rng, true);
    CHECK(iso.v.determinant() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("reference subalgebras exist exactly at the admissible signatures") {
  const auto real = make_real_heisenberg(1);
  const auto real2 = make_real_heisenberg(2);
  const auto cplx = make_complex_heisenberg(1);
  const auto quat = make_quaternion_heisenberg(1);

  const std::vector<std::pair<AlgebraPtr, std::pair<int, int>>> good = {
      {real, {1, 0}}, {real, {1, 1}}, {real, {2, 1}},  {real2, {2, 0}}, {real2, {3, 1}},
      {cplx, {1, 0}}, {cplx, {2, 0}}, {cplx, {2, 1}},  {cplx, {2, 2}},  {cplx, {3, 2}},
      {cplx, {4, 2}}, {quat, {1, 0}}, {quat, {3, 3}},  {quat, {4, 3}}};
  for (const auto& [alg, sig] : good) {
    const auto sub = reference_subalgebra(alg, sig.first, sig.second);
    CHECK(sub.k_h() == sig.first);
    CHECK(sub.k_v() == sig.second);
    CHECK(subalgebra_closure_residual(sub) < 1e-12);
  }

  CHECK_THROWS_AS(reference_subalgebra(real, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(reference_subalgebra(cplx, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(reference_subalgebra(quat, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(reference_subalgebra(quat, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(reference_subalgebra(real, 3, 1), std::invalid_argument);
}

TEST_CASE("grassmannian samples stay closed under the bracket") {
  Rng rng(77);
  struct Probe {
    AlgebraPtr alg;
    int kh, kv;
  };
  const std::vector<Probe> probes = {{make_real_heisenberg(2), 2, 0},
                                     {make_complex_heisenberg(1), 2, 1},
                                     {make_quaternion_heisenberg(1), 3, 3}};
  for (const auto& pr : probes) {
    for (int s = 0; s < 100; ++s) {
      const auto sub = sample_grassmannian(pr.alg, pr.kh, pr.kv, rng);
      CHECK(subalgebra_closure_residual(sub) < 1e-10);
    }
  }
}

TEST_CASE("transforming a subalgebra keeps bases orthonormal") {
  Rng rng(88);
  const auto alg = make_complex_heisenberg(2);
  const auto ref = reference_subalgebra(alg, 4, 2);
  for (int s = 0; s < 25; ++s) {
    const auto sub = transform(sample_isometry(alg, rng, true), ref);
    const int kh = sub.k_h(), kv = sub.k_v();
    CHECK((sub.basis_h.transpose() * sub.basis_h - Eigen::MatrixXd::Identity(kh, kh)).norm() <
          1e-12);
    CHECK((sub.basis_v.transpose() * sub.basis_v - Eigen::MatrixXd::Identity(kv, kv)).norm() <
          1e-12);
    CHECK(subalgebra_closure_residual(sub) < 1e-10);
  }
}

TEST_CASE("sphere pushforward preserves layer norms") {
  Rng rng(99);
  const auto alg = make_complex_heisenberg(1);
  Eigen::VectorXd x(4), t(2);
  x << 0.5, -0.5, 0.5, 0.5;
  t << 0.6, 0.8;
  const auto orbit = sphere_pushforward(alg, x, t, 64, rng);
  CHECK(orbit.rows() == 64);
  CHECK(orbit.cols() == 6);
  for (int i = 0; i < orbit.rows(); ++i) {
    CHECK(orbit.row(i).head(4).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(orbit.row(i).tail(2).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
