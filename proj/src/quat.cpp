#include "cknet/quat.hpp"

#include <algorithm>
#include <sstream>

#include "cknet/error.hpp"

namespace cknet {

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

std::ostream& operator<<(std::ostream& os, const Biquat& q) {
  return os << "[" << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3] << "]";
}

Biquat Biquat::basis(int k) {
  Biquat q;
  q[k] = 1.0;
  return q;
}

Biquat Biquat::pauli(int k) { return basis(k) * kI; }

// M = c0 1 + c1 (-i s1) + c2 (-i s2) + c3 (-i s3)
//   = [[c0 - i c3, -i c1 - c2], [-i c1 + c2, c0 + i c3]]
Mat2 Biquat::matrix() const {
  const auto& [c0, c1, c2, c3] = c_;
  return {c0 - kI * c3, -kI * c1 - c2, -kI * c1 + c2, c0 + kI * c3};
}

Biquat Biquat::from_matrix(const Mat2& m) {
  return {(m.a + m.d) * 0.5, kI * (m.b + m.c) * 0.5, (m.c - m.b) * 0.5, kI * (m.a - m.d) * 0.5};
}

Biquat Biquat::operator+(const Biquat& o) const {
  return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2], c_[3] + o.c_[3]};
}

Biquat Biquat::operator-(const Biquat& o) const {
  return {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2], c_[3] - o.c_[3]};
}

Biquat Biquat::operator-() const { return {-c_[0], -c_[1], -c_[2], -c_[3]}; }

Biquat& Biquat::operator+=(const Biquat& o) {
  for (int i = 0; i < 4; ++i) c_[i] += o.c_[i];
  return *this;
}

// Complexified Hamilton product: (a0, a)(b0, b) = (a0 b0 - a.b, a0 b + b0 a + a x b).
Biquat Biquat::operator*(const Biquat& o) const {
  const auto& [a0, a1, a2, a3] = c_;
  const auto& [b0, b1, b2, b3] = o.c_;
  return {a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
          a0 * b1 + b0 * a1 + a2 * b3 - a3 * b2,
          a0 * b2 + b0 * a2 + a3 * b1 - a1 * b3,
          a0 * b3 + b0 * a3 + a1 * b2 - a2 * b1};
}

Biquat Biquat::operator*(cplx s) const { return {c_[0] * s, c_[1] * s, c_[2] * s, c_[3] * s}; }

Biquat Biquat::operator/(cplx s) const { return {c_[0] / s, c_[1] / s, c_[2] / s, c_[3] / s}; }

cplx Biquat::det() const {
  return c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2] + c_[3] * c_[3];
}

Biquat Biquat::conj() const { return {c_[0], -c_[1], -c_[2], -c_[3]}; }

double Biquat::max_abs() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

bool Biquat::is_quaternion(double tol) const {
  const double scale = std::max(1.0, max_abs());
  return std::all_of(c_.begin(), c_.end(),
                     [&](const cplx& c) { return std::abs(c.imag()) <= tol * scale; });
}

Biquat mul(const Biquat& a, const Biquat& b) { return a * b; }

Biquat inverse(const Biquat& a) {
  const cplx d = a.det();
  const double scale = std::max(1e-300, a.max_abs() * a.max_abs());
  if (std::abs(d) < tol::kSingular * scale || std::abs(d) == 0.0) {
    std::ostringstream os;
    os << "|det| = " << std::abs(d) << " for " << a;
    throw Error(ErrorKind::SingularMatrix, os.str());
  }
  return a.conj() / d;
}

Vec3 trace_free(const Biquat& q, double tol) {
  const double scale = std::max(1.0, q.max_abs());
  for (int k = 1; k <= 3; ++k) {
    if (std::abs(q[k].imag()) > tol * scale) {
      std::ostringstream os;
      os << "imaginary residue " << std::abs(q[k].imag()) << " in component " << k;
      throw Error(ErrorKind::NonRealImage, os.str());
    }
  }
  return {q[1].real(), q[2].real(), q[3].real()};
}

Vec3 conjugate_normal(const Biquat& phi) {
  return trace_free(inverse(phi) * Biquat::basis(3) * phi);
}

NormalizedPair normalize_unit_det(const Biquat& a, const Biquat& da) {
  const cplx d = a.det();
  if (std::abs(d) == 0.0) throw Error(ErrorKind::SingularMatrix, "cannot normalize a singular matrix");
  cplx ddet = 0.0;
  for (int i = 0; i < 4; ++i) ddet += 2.0 * a[i] * da[i];
  const cplx root = std::sqrt(d);
  return {a / root, da / root - a * (ddet / (2.0 * d * root))};
}

}  // namespace cknet
