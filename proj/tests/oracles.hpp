#pragma once

// Reference computations that do not go through the library: raw 2x2
// complex matrices, planar complex cross-ratios and finite differences.

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "cknet/quat.hpp"

namespace oracle {

using cplx = std::complex<double>;
using M2 = std::array<cplx, 4>;  // row-major [[0, 1], [2, 3]]

inline constexpr cplx I{0.0, 1.0};

inline M2 mul(const M2& a, const M2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

inline cplx det(const M2& a) { return a[0] * a[3] - a[1] * a[2]; }

inline M2 inv(const M2& a) {
  const cplx d = det(a);
  return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
}

inline M2 scale(const M2& a, cplx s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

inline M2 sub(const M2& a, const M2& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

inline double max_abs(const M2& a) {
  double m = 0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

inline M2 from(const cknet::Mat2& m) { return {m.a, m.b, m.c, m.d}; }

// Pauli matrices.
inline const M2 s1{0.0, 1.0, 1.0, 0.0};
inline const M2 s2{0.0, -I, I, 0.0};
inline const M2 s3{1.0, 0.0, 0.0, -1.0};

// Coordinates of a trace-free matrix over (-i s1, -i s2, -i s3) via
// x_k = tr(M * i s_k) / 2 (since (-i s_k)(i s_k) = 1).
inline std::array<cplx, 3> coords(const M2& m) {
  std::array<cplx, 3> out{};
  const M2* basis[3] = {&s1, &s2, &s3};
  for (int k = 0; k < 3; ++k) {
    const M2 p = mul(m, scale(*basis[k], I));
    out[k] = (p[0] + p[3]) / 2.0;
  }
  return out;
}

inline cknet::Vec3 real_coords(const M2& m) {
  const auto c = coords(m);
  return {c[0].real(), c[1].real(), c[2].real()};
}

// Sym formula on raw matrices.
inline cknet::Vec3 sym_f(const M2& phi, const M2& dphi) {
  const auto v = real_coords(mul(inv(phi), dphi));
  return {2 * v.x, 2 * v.y, 2 * v.z};
}

inline cknet::Vec3 sym_n(const M2& phi) { return real_coords(scale(mul(mul(inv(phi), s3), phi), -I)); }

// Cross-ratio of four complex numbers.
inline cplx cross_ratio(cplx a, cplx b, cplx c, cplx d) { return (a - b) / (b - c) * (c - d) / (d - a); }

// Central difference of a matrix-valued function of t.
template <class F>
M2 central_difference(F&& f, double t, double h) {
  const M2 a = f(t + h);
  const M2 b = f(t - h);
  return scale(sub(a, b), 1.0 / (2 * h));
}

inline double det3(const cknet::Vec3& a, const cknet::Vec3& b, const cknet::Vec3& c) {
  return a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long seed) : gen(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  double sign() { return uniform(0, 1) < 0.5 ? -1.0 : 1.0; }
  cplx unit() { return std::exp(I * uniform(-M_PI, M_PI)); }
  cplx complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
};

}  // namespace oracle
