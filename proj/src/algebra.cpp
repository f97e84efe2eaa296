#include "carnot/algebra.hpp"

namespace carnot {

namespace {

// Right multiplication by i, j, k on one quaternion slot with basis (1, i, j, k).
// Columns are images of the basis vectors.
Eigen::Matrix4d right_mult_i() {
  Eigen::Matrix4d m;
  // 1 -> i, i -> -1, j -> -k, k -> j
  m << 0, -1, 0, 0,
       1,  0, 0, 0,
       0,  0, 0, 1,
       0,  0, -1, 0;
  return m;
}

Eigen::Matrix4d right_mult_j() {
  Eigen::Matrix4d m;
  // 1 -> j, i -> k, j -> -1, k -> -i
  m << 0,  0, -1, 0,
       0,  0, 0, -1,
       1,  0, 0,  0,
       0,  1, 0,  0;
  return m;
}

Eigen::Matrix4d right_mult_k() {
  Eigen::Matrix4d m;
  // 1 -> k, i -> -j, j -> i, k -> -1
  m << 0, 0, 0, -1,
       0, 0, 1,  0,
       0, -1, 0, 0,
       1, 0, 0,  0;
  return m;
}

Eigen::MatrixXd block_repeat(const Eigen::MatrixXd& block, int slots) {
  const int b = static_cast<int>(block.rows());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b * slots, b * slots);
  for (int s = 0; s < slots; ++s) m.block(s * b, s * b, b, b) = block;
  return m;
}

}  // namespace

HTypeAlgebra HTypeAlgebra::real_heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("real_heisenberg: n must be positive");
  Eigen::Matrix2d j2;
  j2 << 0, -1,
        1,  0;  // X_k -> Y_k, Y_k -> -X_k
  std::vector<Eigen::MatrixXd> j{block_repeat(j2, n)};
  return HTypeAlgebra(AlgebraKind::RealHeis, n, 2 * n, 1, std::move(j));
}

HTypeAlgebra HTypeAlgebra::complex_heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("complex_heisenberg: n must be positive");
  std::vector<Eigen::MatrixXd> j{block_repeat(right_mult_i(), n), block_repeat(right_mult_j(), n)};
  return HTypeAlgebra(AlgebraKind::ComplexHeis, n, 4 * n, 2, std::move(j));
}

HTypeAlgebra HTypeAlgebra::quaternion_heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("quaternion_heisenberg: n must be positive");
  std::vector<Eigen::MatrixXd> j{block_repeat(right_mult_i(), n), block_repeat(right_mult_j(), n),
                                 block_repeat(right_mult_k(), n)};
  return HTypeAlgebra(AlgebraKind::QuatHeis, n, 4 * n, 3, std::move(j));
}

HTypeAlgebra HTypeAlgebra::abelian(int m1) {
  if (m1 < 1) throw std::invalid_argument("abelian: dimension must be positive");
  return HTypeAlgebra(AlgebraKind::GenericStep2, 0, m1, 0, {});
}

HTypeAlgebra HTypeAlgebra::generic_step2(std::vector<Eigen::MatrixXd> j) {
  if (j.empty()) throw std::invalid_argument("generic_step2: no bracket matrices (use abelian)");
  const int m1 = static_cast<int>(j.front().rows());
  for (const auto& m : j) {
    if (m.rows() != m1 || m.cols() != m1)
      throw std::invalid_argument("generic_step2: bracket matrices must be square of equal size");
    if ((m + m.transpose()).norm() > 1e-12 * (1.0 + m.norm()))
      throw std::invalid_argument("generic_step2: bracket matrices must be skew-symmetric");
  }
  const int m2 = static_cast<int>(j.size());
  return HTypeAlgebra(AlgebraKind::GenericStep2, 0, m1, m2, std::move(j));
}

Eigen::MatrixXd HTypeAlgebra::j_of(const Eigen::VectorXd& z) const {
  if (z.size() != m2_) throw std::invalid_argument("j_of: center vector has wrong length");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(m1_, m1_);
  for (int a = 0; a < m2_; ++a) m += z[a] * j_[static_cast<std::size_t>(a)];
  return m;
}

Eigen::VectorXd HTypeAlgebra::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (u.size() != m1_ || v.size() != m1_)
    throw std::invalid_argument("bracket: horizontal vectors have wrong length");
  Eigen::VectorXd out(m2_);
  for (int a = 0; a < m2_; ++a) out[a] = (j_[static_cast<std::size_t>(a)] * u).dot(v);
  return out;
}

std::string HTypeAlgebra::name() const {
  switch (kind_) {
    case AlgebraKind::RealHeis:
      return "hR(" + std::to_string(slots_) + ")";
    case AlgebraKind::ComplexHeis:
      return "hC(" + std::to_string(slots_) + ")";
    case AlgebraKind::QuatHeis:
      return "hQ(" + std::to_string(slots_) + ")";
    case AlgebraKind::GenericStep2:
      return m2_ == 0 ? "R^" + std::to_string(m1_)
                      : "step2(" + std::to_string(m1_) + "," + std::to_string(m2_) + ")";
  }
  return "?";
}

bool HTypeAlgebra::same_structure(const HTypeAlgebra& other) const {
  if (kind_ != other.kind_ || m1_ != other.m1_ || m2_ != other.m2_) return false;
  for (std::size_t a = 0; a < j_.size(); ++a) {
    if ((j_[a] - other.j_[a]).norm() > 0) return false;
  }
  return true;
}

}  // namespace carnot
