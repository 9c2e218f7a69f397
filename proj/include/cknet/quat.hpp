#pragma once

// Biquaternions as complex coefficient vectors over the Pauli basis
//   e0 = 1, e1 = -i sigma_1, e2 = -i sigma_2, e3 = -i sigma_3,
// which satisfy the Hamilton relations e1 e2 = e3 (cyclic), e_k^2 = -1.
// Real coefficients give the quaternions; R^3 is identified with the
// imaginary (trace-free) quaternions.

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "cknet/tolerance.hpp"

namespace cknet {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline double max_abs(const Vec3& v) {
  return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}
std::ostream& operator<<(std::ostream& os, const Vec3& v);

/// Row-major 2x2 complex matrix; the "view" form of a Biquat.
struct Mat2 {
  cplx a, b, c, d;  // [[a, b], [c, d]]

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  cplx det() const { return a * d - b * c; }
  double max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  }
};

class Biquat {
 public:
  constexpr Biquat() = default;
  constexpr Biquat(cplx c0, cplx c1, cplx c2, cplx c3) : c_{c0, c1, c2, c3} {}

  static constexpr Biquat identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Biquat zero() { return {}; }
  static constexpr Biquat scalar(cplx s) { return {s, 0.0, 0.0, 0.0}; }
  /// Basis element e_k = -i sigma_k for k = 1..3 (k = 0 gives the identity).
  static Biquat basis(int k);
  /// Pauli matrix sigma_k itself (k = 1..3), i.e. i * e_k.
  static Biquat pauli(int k);
  static Biquat from_matrix(const Mat2& m);
  /// Embeds a vector as the imaginary quaternion x e1 + y e2 + z e3.
  static constexpr Biquat embed(const Vec3& v) { return {0.0, v.x, v.y, v.z}; }

  Mat2 matrix() const;

  constexpr const cplx& operator[](int i) const { return c_[i]; }
  constexpr cplx& operator[](int i) { return c_[i]; }
  constexpr const std::array<cplx, 4>& coeffs() const { return c_; }

  Biquat operator+(const Biquat& o) const;
  Biquat operator-(const Biquat& o) const;
  Biquat operator-() const;
  Biquat operator*(const Biquat& o) const;
  Biquat operator*(cplx s) const;
  Biquat operator/(cplx s) const;
  Biquat& operator+=(const Biquat& o);

  /// Matrix determinant; equals c0^2 + c1^2 + c2^2 + c3^2 (no conjugation).
  cplx det() const;
  /// Quaternionic conjugate (c0, -c1, -c2, -c3); q * conj(q) = det(q).
  Biquat conj() const;
  /// Largest |coefficient|.
  double max_abs() const;
  bool is_quaternion(double tol = tol::kDefault) const;

 private:
  std::array<cplx, 4> c_{};
};

inline Biquat operator*(cplx s, const Biquat& q) { return q * s; }
std::ostream& operator<<(std::ostream& os, const Biquat& q);

Biquat mul(const Biquat& a, const Biquat& b);

/// Throws SingularMatrix when |det| is below tol::kSingular (relative to
/// the squared coefficient scale).
Biquat inverse(const Biquat& a);

/// Coefficients over e1, e2, e3 as a real vector. Throws NonRealImage when
/// the imaginary parts exceed tol relative to max(1, |q|).
Vec3 trace_free(const Biquat& q, double tol = tol::kDefault);

/// n = -i phi^{-1} sigma_3 phi, returned as a vector.
Vec3 conjugate_normal(const Biquat& phi);

/// 1/sqrt(det) rescaling and the matching t-derivative. Returns the pair
/// (A / sqrt(det A), d/dt of that) given A and dA/dt.
struct NormalizedPair {
  Biquat value;
  Biquat derivative;
};
NormalizedPair normalize_unit_det(const Biquat& a, const Biquat& da);

}  // namespace cknet
