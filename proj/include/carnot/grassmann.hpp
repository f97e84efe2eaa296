#pragma once

#include <complex>

#include "carnot/rng.hpp"
#include "carnot/split.hpp"

namespace carnot {

// Haar-distributed orthogonal / unitary matrices via Gaussian fill plus
// modified Gram-Schmidt with positive diagonal.
Eigen::MatrixXd haar_orthogonal(int n, Rng& rng);
Eigen::MatrixXcd haar_unitary(int n, Rng& rng);

// n x n quaternion matrix, Haar on the compact symplectic group, returned as
// its 4n x 4n real embedding by left multiplication per 4-slot (commutes with
// the right-multiplication J blocks of the quaternion H-type algebra).
Eigen::MatrixXd haar_symplectic_embedded(int n, Rng& rng);

// complex n x n into real 2n x 2n with per-slot blocks [[a, -b], [b, a]]
Eigen::MatrixXd embed_unitary(const Eigen::MatrixXcd& u);

// Horizontal/vertical pair of a group isometry fixing e: x -> U x, t -> V t
// with U^T J_z U = J_{V^T z}.
struct Isometry {
  Eigen::MatrixXd u;  // m1 x m1
  Eigen::MatrixXd v;  // m2 x m2
};

// Haar sample from the isometry group of the given H-type algebra.
// with_reflections additionally flips the orientation-reversing generator
// with probability 1/2 where the family has one (real: conjugation, always
// sampled; complex: the extra J_{eps1}-conjugation class; quaternion: none
// exists, the flag is a no-op).
Isometry sample_isometry(const AlgebraPtr& alg, Rng& rng, bool with_reflections = false);

GroupPoint apply_isometry(const Isometry& iso, const GroupPoint& g);

// worst-case |U^T J_z U - J_{V^T z}| over the vertical basis
double isometry_compatibility_residual(const AlgebraPtr& alg, const Isometry& iso);

// Homogeneous subalgebra given by orthonormal horizontal/vertical bases.
struct Subalgebra {
  AlgebraPtr alg;
  Eigen::MatrixXd basis_h;  // m1 x k_h
  Eigen::MatrixXd basis_v;  // m2 x k_v

  int k_h() const { return static_cast<int>(basis_h.cols()); }
  int k_v() const { return static_cast<int>(basis_v.cols()); }
};

// Reference subalgebra with a complementary closed subalgebra, one per
// admissible signature (k_h, k_v); rejects inadmissible signatures with an
// explanation of which closure fails.
Subalgebra reference_subalgebra(const AlgebraPtr& alg, int k_h, int k_v);

Subalgebra transform(const Isometry& iso, const Subalgebra& sub);

// Haar sample of the isometry orbit of the reference subalgebra
Subalgebra sample_grassmannian(const AlgebraPtr& alg, int k_h, int k_v, Rng& rng,
                               bool with_reflections = false);

// max bracket-closure defect of the subalgebra AND of its orthogonal
// complement, plus orthonormality defect of the bases
double subalgebra_closure_residual(const Subalgebra& sub);

// orbit of a fixed point under sampled isometries: rows are (U x | V t)
Eigen::MatrixXd sphere_pushforward(const AlgebraPtr& alg, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& t, int count, Rng& rng,
                                   bool with_reflections = false);

}  // namespace carnot
