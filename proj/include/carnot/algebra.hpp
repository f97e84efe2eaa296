#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace carnot {

enum class AlgebraKind { RealHeis, ComplexHeis, QuatHeis, GenericStep2 };

// Step-2 stratified algebra g = h1 + h2 in exponential coordinates.
// The bracket is encoded by skew matrices J_a (one per center direction):
//   [u, v]_a = <J_a u, v>,   u, v in h1.
// For the three H-type families the J_a are orthogonal anticommuting complex
// structures built from right quaternion multiplication per 4-dim slot
// (2-dim slots for the real family); that orientation reproduces the
// commutator tables and the left-invariant frame coefficient tables exactly.
class HTypeAlgebra {
 public:
  static HTypeAlgebra real_heisenberg(int n);
  static HTypeAlgebra complex_heisenberg(int n);
  static HTypeAlgebra quaternion_heisenberg(int n);
  // abelian R^m1 (empty center); Euclidean fixtures use this
  static HTypeAlgebra abelian(int m1);
  // arbitrary step-2 algebra from skew bracket matrices
  static HTypeAlgebra generic_step2(std::vector<Eigen::MatrixXd> j);

  AlgebraKind kind() const { return kind_; }
  int slots() const { return slots_; }
  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int dim() const { return m1_ + m2_; }                  // topological
  int homogeneous_dim() const { return m1_ + 2 * m2_; }  // Hausdorff

  const Eigen::MatrixXd& j_matrix(int a) const { return j_.at(static_cast<std::size_t>(a)); }

  // J_z = sum_a z_a J_a
  Eigen::MatrixXd j_of(const Eigen::VectorXd& z) const;

  // [u, v] in h2 coordinates; u, v are h1 vectors (length m1)
  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  bool is_htype() const { return kind_ != AlgebraKind::GenericStep2; }

  std::string name() const;

  bool same_structure(const HTypeAlgebra& other) const;

 private:
  HTypeAlgebra(AlgebraKind kind, int slots, int m1, int m2, std::vector<Eigen::MatrixXd> j)
      : kind_(kind), slots_(slots), m1_(m1), m2_(m2), j_(std::move(j)) {}

  AlgebraKind kind_;
  int slots_;  // n for the H-type families, 0 for generic
  int m1_, m2_;
  std::vector<Eigen::MatrixXd> j_;
};

using AlgebraPtr = std::shared_ptr<const HTypeAlgebra>;

inline AlgebraPtr make_real_heisenberg(int n) {
  return std::make_shared<const HTypeAlgebra>(HTypeAlgebra::real_heisenberg(n));
}
inline AlgebraPtr make_complex_heisenberg(int n) {
  return std::make_shared<const HTypeAlgebra>(HTypeAlgebra::complex_heisenberg(n));
}
inline AlgebraPtr make_quaternion_heisenberg(int n) {
  return std::make_shared<const HTypeAlgebra>(HTypeAlgebra::quaternion_heisenberg(n));
}
inline AlgebraPtr make_abelian(int m1) {
  return std::make_shared<const HTypeAlgebra>(HTypeAlgebra::abelian(m1));
}

// Group element in exponential coordinates: first m1 entries horizontal,
// last m2 vertical.
struct GroupPoint {
  AlgebraPtr alg;
  Eigen::VectorXd c;

  GroupPoint() = default;
  GroupPoint(AlgebraPtr a, Eigen::VectorXd coords) : alg(std::move(a)), c(std::move(coords)) {
    if (!alg) throw std::invalid_argument("GroupPoint: null algebra");
    if (c.size() != alg->dim()) throw std::invalid_argument("GroupPoint: coordinate length mismatch");
  }

  Eigen::VectorXd horizontal() const { return c.head(alg->m1()); }
  Eigen::VectorXd vertical() const { return c.tail(alg->m2()); }
};

inline GroupPoint identity_point(const AlgebraPtr& alg) {
  return GroupPoint(alg, Eigen::VectorXd::Zero(alg->dim()));
}

inline void require_same_algebra(const GroupPoint& a, const GroupPoint& b) {
  if (a.alg.get() == b.alg.get()) return;
  if (a.alg && b.alg && a.alg->same_structure(*b.alg)) return;
  throw std::invalid_argument("group points belong to different algebras");
}

}  // namespace carnot
