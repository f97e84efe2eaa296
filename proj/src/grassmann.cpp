#include "carnot/grassmann.hpp"

#include <cmath>
#include <numbers>

namespace carnot {
namespace {

struct Quat {
  double w = 0, x = 0, y = 0, z = 0;

  Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
  }
  Quat operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
  Quat conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
};

// right multiplication v -> v . q on coordinates (1, i, j, k)
Eigen::Matrix4d right_mult(const Quat& q) {
  Eigen::Matrix4d m;
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w,  q.z, -q.y,
       q.y, -q.z,  q.w,  q.x,
       q.z,  q.y, -q.x,  q.w;
  return m;
}

// left multiplication v -> q . v
Eigen::Matrix4d left_mult(const Quat& q) {
  Eigen::Matrix4d m;
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w, -q.z,  q.y,
       q.y,  q.z,  q.w, -q.x,
       q.z, -q.y,  q.x,  q.w;
  return m;
}

// rotation of the imaginary part under v -> q v conj(q), unit q
Eigen::Matrix3d rotation_of(const Quat& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Quat random_unit_quat(Rng& rng) {
  for (;;) {
    const Quat q{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n2 = q.norm2();
    if (n2 > 1e-12) return q * (1.0 / std::sqrt(n2));
  }
}

}  // namespace

Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_orthogonal: n must be positive");
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = rng.gaussian();
  // modified Gram-Schmidt, two passes, positive diagonal by construction
  for (int k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < k; ++l) a.col(k) -= a.col(l).dot(a.col(k)) * a.col(l);
    const double r = a.col(k).norm();
    if (r < 1e-12) throw std::runtime_error("haar_orthogonal: degenerate sample");
    a.col(k) /= r;
  }
  return a;
}

Eigen::MatrixXcd haar_unitary(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be positive");
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  for (int k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < k; ++l) a.col(k) -= a.col(l).dot(a.col(k)) * a.col(l);
    const double r = a.col(k).norm();
    if (r < 1e-12) throw std::runtime_error("haar_unitary: degenerate sample");
    a.col(k) /= r;
  }
  return a;
}

Eigen::MatrixXd embed_unitary(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  Eigen::MatrixXd e(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = u(i, j).real(), b = u(i, j).imag();
      e(2 * i, 2 * j) = a;
      e(2 * i, 2 * j + 1) = -b;
      e(2 * i + 1, 2 * j) = b;
      e(2 * i + 1, 2 * j + 1) = a;
    }
  return e;
}

Eigen::MatrixXd haar_symplectic_embedded(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_symplectic: n must be positive");
  std::vector<Quat> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const auto at = [&](int i, int j) -> Quat& {
    return a[static_cast<std::size_t>(j) * n + i];
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      at(i, j) = {rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
  // right-module Gram-Schmidt: coefficients multiply from the right
  for (int k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < k; ++l) {
        Quat c{};
        for (int i = 0; i < n; ++i) c = c + at(i, l).conj() * at(i, k);
        for (int i = 0; i < n; ++i) at(i, k) = at(i, k) - at(i, l) * c;
      }
    double n2 = 0.0;
    for (int i = 0; i < n; ++i) n2 += at(i, k).norm2();
    if (n2 < 1e-24) throw std::runtime_error("haar_symplectic: degenerate sample");
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < n; ++i) at(i, k) = at(i, k) * inv;
  }
  Eigen::MatrixXd e(4 * n, 4 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.block<4, 4>(4 * i, 4 * j) = left_mult(at(i, j));
  return e;
}

Isometry sample_isometry(const AlgebraPtr& alg, Rng& rng, bool with_reflections) {
  const int n = alg->slots();
  const int m1 = alg->m1();
  Isometry iso;
  switch (alg->kind()) {
    case AlgebraKind::RealHeis: {
      iso.u = embed_unitary(haar_unitary(n, rng));
      const bool flip = rng.bernoulli();
      iso.v = Eigen::MatrixXd::Constant(1, 1, flip ? -1.0 : 1.0);
      if (flip) {
        // conjugation (x, y) -> (x, -y) per slot anticommutes with J
        for (int s = 0; s < n; ++s) iso.u.row(2 * s + 1) *= -1.0;
      }
      return iso;
    }
    case AlgebraKind::ComplexHeis: {
      Eigen::MatrixXd u = haar_symplectic_embedded(n, rng);
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
      // J_alpha = cos(theta/2) Id + sin(theta/2) J1 J2 rotates (eps1, eps2)
      const Eigen::MatrixXd rot =
          c * Eigen::MatrixXd::Identity(m1, m1) + s * (alg->j_matrix(0) * alg->j_matrix(1));
      u = rot * u;
      Eigen::Matrix2d v;
      v << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
      if (with_reflections && rng.bernoulli()) {
        u = alg->j_matrix(0) * u;
        v.row(1) *= -1.0;
      }
      iso.u = u;
      iso.v = v;
      return iso;
    }
    case AlgebraKind::QuatHeis: {
      const Eigen::MatrixXd b = haar_symplectic_embedded(n, rng);
      const Quat q = random_unit_quat(rng);
      Eigen::MatrixXd rq = Eigen::MatrixXd::Zero(m1, m1);
      for (int s = 0; s < n; ++s) rq.block<4, 4>(4 * s, 4 * s) = right_mult(q.conj());
      iso.u = rq * b;
      iso.v = rotation_of(q);
      // no orientation-reversing vertical isometry exists here: J1 = -J2 J3
      // pins det(V) = +1, so with_reflections has nothing to add
      (void)with_reflections;
      return iso;
    }
    case AlgebraKind::GenericStep2:
      break;
  }
  throw std::domain_error("sample_isometry: isometry families are tabulated for the H-type kinds");
}

GroupPoint apply_isometry(const Isometry& iso, const GroupPoint& g) {
  const auto& alg = *g.alg;
  Eigen::VectorXd c(alg.dim());
  c.head(alg.m1()) = iso.u * g.c.head(alg.m1());
  if (alg.m2() > 0) c.tail(alg.m2()) = iso.v * g.c.tail(alg.m2());
  return GroupPoint(g.alg, std::move(c));
}

double isometry_compatibility_residual(const AlgebraPtr& alg, const Isometry& iso) {
  double worst = 0.0;
  for (int a = 0; a < alg->m2(); ++a) {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(alg->m1(), alg->m1());
    for (int b = 0; b < alg->m2(); ++b) rhs += iso.v(a, b) * alg->j_matrix(b);
    const Eigen::MatrixXd lhs = iso.u.transpose() * alg->j_matrix(a) * iso.u;
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

Eigen::MatrixXd columns_from(int dim, const std::vector<int>& idx) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, static_cast<int>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) b(idx[c], static_cast<int>(c)) = 1.0;
  return b;
}

[[noreturn]] void reject_signature(const std::string& why) {
  throw std::invalid_argument("reference_subalgebra: " + why);
}

}  // namespace

Subalgebra reference_subalgebra(const AlgebraPtr& alg, int k_h, int k_v) {
  const int n = alg->slots();
  const int m1 = alg->m1();
  const int m2 = alg->m2();
  if (k_h < 0 || k_h > m1 || k_v < 0 || k_v > m2) reject_signature("signature out of range");
  if (k_h == 0 && k_v > 0)
    reject_signature(
        "purely vertical subalgebras have no closed complement: the complement would need all "
        "horizontal directions, whose brackets fill the center");
  std::vector<int> h, v;
  switch (alg->kind()) {
    case AlgebraKind::RealHeis: {
      if (k_v == 0) {
        // commuting horizontal: one direction per slot
        if (k_h > n) reject_signature("horizontal signatures need k_h <= n: X and Y in one slot bracket to the center");
        for (int s = 0; s < k_h; ++s) h.push_back(2 * s);
      } else {
        // vertical subalgebras contain the center; the complement must stay
        // commutative, so it can keep at most one direction per slot
        if (k_h < n) reject_signature("vertical signatures need k_h >= n: a smaller subalgebra leaves X, Y of one slot in the complement, which is not closed");
        for (int s = 0; s < n; ++s) h.push_back(2 * s + 1);
        for (int s = 0; s < k_h - n; ++s) h.push_back(2 * s);
        v.push_back(0);
      }
      break;
    }
    case AlgebraKind::ComplexHeis: {
      // slot frame (X1, X2, X3, X4); {X1, X4} and {X2, X3} commute, while
      // [X1, X2] and [X3, X4] hit eps1, [X1, X3], [X2, X4] hit eps2
      if (k_v == 0) {
        if (k_h > 2 * n) reject_signature("horizontal signatures need k_h <= 2n here");
        for (int c = 0; c < k_h; ++c) h.push_back(4 * (c / 2) + (c % 2 == 0 ? 0 : 3));
      } else if (k_v == 1) {
        if (k_h != 2 * n)
          reject_signature(
              "k_v = 1 forces k_h = 2n: with eps1 only, the subalgebra can hold exactly the "
              "commuting-to-eps1 pairs {X1, X4}, and its complement {X2, X3} + eps2 matches");
        for (int s = 0; s < n; ++s) {
          h.push_back(4 * s);
          h.push_back(4 * s + 3);
        }
        v.push_back(0);
      } else {
        if (k_h < 2 * n) reject_signature("k_v = 2 needs k_h >= 2n: the complement must stay commutative");
        if (k_h > m1) reject_signature("signature out of range");
        for (int s = 0; s < n; ++s) {
          h.push_back(4 * s + 1);
          h.push_back(4 * s + 2);
        }
        for (int c = 0; c < k_h - 2 * n; ++c) h.push_back(4 * (c / 2) + (c % 2 == 0 ? 0 : 3));
        v.push_back(0);
        v.push_back(1);
      }
      break;
    }
    case AlgebraKind::QuatHeis: {
      if (k_v == 0) {
        if (k_h > n) reject_signature("horizontal signatures need k_h <= n: two directions in one slot bracket into the center");
        for (int s = 0; s < k_h; ++s) h.push_back(4 * s);
      } else if (k_v == 3) {
        if (k_h < 3 * n) reject_signature("vertical signatures need k_h >= 3n: otherwise the complement keeps a bracketing pair");
        for (int s = 0; s < n; ++s) {
          h.push_back(4 * s + 1);
          h.push_back(4 * s + 2);
          h.push_back(4 * s + 3);
        }
        for (int s = 0; s < k_h - 3 * n; ++s) h.push_back(4 * s);
        v = {0, 1, 2};
      } else {
        reject_signature(
            "vertical subalgebras here need the full center (k_v = 3): a proper sub-span of the "
            "center is not an ideal of any closed complemented pair");
      }
      break;
    }
    case AlgebraKind::GenericStep2:
      reject_signature("no reference table for generic step-2 algebras");
  }
  Subalgebra sub;
  sub.alg = alg;
  sub.basis_h = columns_from(m1, h);
  sub.basis_v = columns_from(m2, v);
  return sub;
}

Subalgebra transform(const Isometry& iso, const Subalgebra& sub) {
  Subalgebra out;
  out.alg = sub.alg;
  out.basis_h = iso.u * sub.basis_h;
  out.basis_v = sub.basis_v.cols() > 0 ? (iso.v * sub.basis_v).eval() : sub.basis_v;
  return out;
}

Subalgebra sample_grassmannian(const AlgebraPtr& alg, int k_h, int k_v, Rng& rng,
                               bool with_reflections) {
  const Subalgebra ref = reference_subalgebra(alg, k_h, k_v);
  return transform(sample_isometry(alg, rng, with_reflections), ref);
}

namespace {

double pair_closure_defect(const HTypeAlgebra& alg, const Eigen::MatrixXd& bh,
                           const Eigen::MatrixXd& bv) {
  double worst = 0.0;
  const Eigen::MatrixXd proj = bv.cols() > 0
                                   ? (bv * bv.transpose()).eval()
                                   : Eigen::MatrixXd::Zero(alg.m2(), alg.m2()).eval();
  for (int i = 0; i < bh.cols(); ++i)
    for (int j = i + 1; j < bh.cols(); ++j) {
      const Eigen::VectorXd w = alg.bracket(bh.col(i), bh.col(j));
      worst = std::max(worst, (w - proj * w).norm());
    }
  return worst;
}

Eigen::MatrixXd ortho_complement(const Eigen::MatrixXd& b, int dim) {
  if (b.cols() == 0) return Eigen::MatrixXd::Identity(dim, dim);
  if (b.cols() == dim) return Eigen::MatrixXd(dim, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(dim - static_cast<int>(b.cols()));
}

}  // namespace

double subalgebra_closure_residual(const Subalgebra& sub) {
  const auto& alg = *sub.alg;
  double worst = 0.0;
  if (sub.basis_h.cols() > 0)
    worst = std::max(
        worst, (sub.basis_h.transpose() * sub.basis_h -
                Eigen::MatrixXd::Identity(sub.k_h(), sub.k_h())).cwiseAbs().maxCoeff());
  if (sub.basis_v.cols() > 0)
    worst = std::max(
        worst, (sub.basis_v.transpose() * sub.basis_v -
                Eigen::MatrixXd::Identity(sub.k_v(), sub.k_v())).cwiseAbs().maxCoeff());
  worst = std::max(worst, pair_closure_defect(alg, sub.basis_h, sub.basis_v));
  const Eigen::MatrixXd ch = ortho_complement(sub.basis_h, alg.m1());
  const Eigen::MatrixXd cv = ortho_complement(sub.basis_v, alg.m2());
  worst = std::max(worst, pair_closure_defect(alg, ch, cv));
  return worst;
}

Eigen::MatrixXd sphere_pushforward(const AlgebraPtr& alg, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& t, int count, Rng& rng,
                                   bool with_reflections) {
  if (x.size() != alg->m1() || t.size() != alg->m2())
    throw std::invalid_argument("sphere_pushforward: component dims mismatch");
  Eigen::MatrixXd out(count, alg->dim());
  for (int i = 0; i < count; ++i) {
    const Isometry iso = sample_isometry(alg, rng, with_reflections);
    out.row(i).head(alg->m1()) = (iso.u * x).transpose();
    if (alg->m2() > 0) out.row(i).tail(alg->m2()) = (iso.v * t).transpose();
  }
  return out;
}

}  // namespace carnot
