#include "cknet/cklax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cknet::cklax {

namespace {

void check_tan(cplx th) {
  if (!(std::abs(th) > tol::kAngle) || !(std::abs(th) < 1.0 / tol::kAngle) || !std::isfinite(std::abs(th))) {
    std::ostringstream os;
    os << "half-angle tangent " << th << " is degenerate";
    throw Error(ErrorKind::DegenerateAngle, os.str());
  }
}

void check_den(cplx den, const char* what) {
  if (!(std::abs(den) > tol::kDenominator)) {
    throw Error(ErrorKind::DegenerateEvolution, std::string("vanishing denominator for ") + what);
  }
}

Vec3 mul_rows(const std::array<Vec3, 3>& rows, const Vec3& v) {
  return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v)};
}

Vec3 mul_transposed(const std::array<Vec3, 3>& rows, const Vec3& v) {
  return rows[0] * v.x + rows[1] * v.y + rows[2] * v.z;
}

// Rotation taking n to e3 about the axis n x e3.
std::array<Vec3, 3> rotation_to_e3(const Vec3& n) {
  const Vec3 v = cross(n, {0, 0, 1});
  const double c = n.z;
  if (norm(v) < tol::kSingular) {
    if (c > 0) return {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    return {Vec3{1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, -1}};
  }
  // I + [v]x + [v]x^2 / (1 + c)
  const double w = 1.0 / (1.0 + c);
  const double vx = v.x, vy = v.y, vz = v.z;
  return {Vec3{1 - w * (vy * vy + vz * vz), -vz + w * vx * vy, vy + w * vx * vz},
          Vec3{vz + w * vx * vy, 1 - w * (vx * vx + vz * vz), -vx + w * vy * vz},
          Vec3{-vy + w * vx * vz, vx + w * vy * vz, 1 - w * (vx * vx + vy * vy)}};
}

Vec3 rotate_z(double g, const Vec3& v) {
  const double c = std::cos(g), s = std::sin(g);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

}  // namespace

cplx half_tan(cplx delta) { return std::tan(delta / 2.0); }

CknetLaxEval lax_from_tan(cplx s, cplx s1, cplx l, cplx th, double t) {
  check_tan(th);
  const cplx ct = 1.0 / th;
  const cplx lam = std::exp(t);
  const cplx ss = s * s1;
  const Mat2 m{ct * l / s + th * l * s1, kI * (lam - ss / lam), kI * (lam - 1.0 / (lam * ss)),
               ct * s / l + th / (l * s1)};
  const Mat2 dm{0.0, kI * (lam + ss / lam), kI * (lam + 1.0 / (lam * ss)), 0.0};
  return {Biquat::from_matrix(m), Biquat::from_matrix(dm), m.det()};
}

CknetLaxEval lax_L(cplx s, cplx s1, cplx l, cplx delta1, double t) {
  return lax_from_tan(s, s1, l, half_tan(delta1), t);
}

CknetLaxEval lax_M(cplx s, cplx s2, cplx m, cplx delta2, double t) {
  return lax_from_tan(s, s2, m, half_tan(delta2), t);
}

cplx expected_det(cplx th, double t) {
  const double lam2 = std::exp(2 * t);
  return lam2 + 1.0 / lam2 + th * th + 1.0 / (th * th);
}

double ell_length(double rho, double rho_i, cplx delta_i) {
  const double a = std::arg(half_tan(delta_i));
  const double num = std::cos(rho_i - a) + std::cos(rho - a);
  const double den = std::cos(rho_i + a) + std::cos(rho + a);
  if (std::abs(den) < tol::kDenominator) {
    if (std::abs(num) < tol::kDenominator) return 1.0;
    throw Error(ErrorKind::NegativeRadicand, "edge-length radicand has a vanishing denominator");
  }
  double q = num / den;
  if (q < 0.0) {
    if (q > -tol::kTight) {
      q = 0.0;
    } else {
      std::ostringstream os;
      os << "edge-length radicand " << q << " for rho = " << rho << ", rho_i = " << rho_i;
      throw Error(ErrorKind::NegativeRadicand, os.str());
    }
  }
  return std::sqrt(q);
}

Evolved evolve_quad_tan(cplx s, cplx s1, cplx s2, cplx l, cplx m, cplx t1, cplx t2) {
  const cplx a1 = s * s1;
  const cplx a2 = s * s2;
  const cplx q1 = t1 * t1;
  const cplx q2 = t2 * t2;

  const cplx l2_den = m * (-l * t2 * (1.0 + a2 * q1) + m * (t1 + a2 * t1 * q2));
  check_den(l2_den, "l2");
  const cplx l2 = (-m * t2 * (a2 + q1) + l * t1 * (a2 + q2)) / l2_den;

  const cplx m1_den = l * (l * t2 * (1.0 + a1 * q1) - m * (t1 + a1 * t1 * q2));
  check_den(m1_den, "m1");
  const cplx m1 = (m * t2 * (a1 + q1) - l * t1 * (a1 + q2)) / m1_den;

  const cplx sp = l * l * t1 * t2 * (1.0 + a1 * q1) * (a2 + q2) + m * m * t1 * t2 * (a1 + q1) * (1.0 + a2 * q2);
  const cplx sm1 = l * m * (a1 * q1 + q2 * (2.0 * q1 + a2 * (1.0 + 2.0 * a1 * q1 + q1 * q1)) + a1 * q1 * q2 * q2);
  const cplx sm2 = l * m * (a2 * q1 + q2 * (2.0 * q1 + a1 * (1.0 + 2.0 * a2 * q1 + q1 * q1)) + a2 * q1 * q2 * q2);
  check_den(sp - sm2, "s12");
  return {l2, m1, s * (sp - sm1) / (sp - sm2)};
}

Evolved evolve_quad(cplx s, cplx s1, cplx s2, cplx l, cplx m, cplx delta1, cplx delta2) {
  return evolve_quad_tan(s, s1, s2, l, m, half_tan(delta1), half_tan(delta2));
}

double compatibility_residual(cplx s, cplx s1, cplx s2, cplx l, cplx m, cplx t1, cplx t2, const Evolved& e) {
  double worst = 0.0;
  for (double lam : {0.5, 1.0, 2.0}) {
    const double t = std::log(lam);
    const Biquat L = lax_from_tan(s, s1, l, t1, t).mat;
    const Biquat M = lax_from_tan(s, s2, m, t2, t).mat;
    const Biquat M1 = lax_from_tan(s1, e.s12, e.m1, t2, t).mat;
    const Biquat L2 = lax_from_tan(s2, e.s12, e.l2, t1, t).mat;
    const double scale = std::max({1.0, M1.max_abs() * L.max_abs(), L2.max_abs() * M.max_abs()});
    worst = std::max(worst, (M1 * L - L2 * M).max_abs() / scale);
  }
  return worst;
}

CknetLaxField complete_field(CknetLaxField f) {
  const auto [K, L] = f.dims;
  if (static_cast<int>(f.delta1.size()) != K - 1 || static_cast<int>(f.delta2.size()) != L - 1) {
    throw Error(ErrorKind::DimensionMismatch, "delta1 needs K - 1 entries and delta2 L - 1");
  }
  for (int l = 0; l + 1 < L; ++l) {
    for (int k = 0; k + 1 < K; ++k) {
      Evolved e;
      try {
        e = evolve_quad(f.s(k, l), f.s(k + 1, l), f.s(k, l + 1), f.l(k, l), f.m(k, l), f.delta1[k], f.delta2[l]);
      } catch (const Error& err) {
        std::ostringstream os;
        os << err.what() << " on quad (" << k << ", " << l << ")";
        throw Error(err.kind(), os.str());
      }
      f.l(k, l + 1) = e.l2;
      f.m(k + 1, l) = e.m1;
      f.s(k + 1, l + 1) = e.s12;
    }
  }
  return f;
}

double field_residual(const CknetLaxField& f) {
  double worst = 0.0;
  for (int l = 0; l + 1 < f.dims.L; ++l) {
    for (int k = 0; k + 1 < f.dims.K; ++k) {
      const Evolved e{f.l(k, l + 1), f.m(k + 1, l), f.s(k + 1, l + 1)};
      worst = std::max(worst, compatibility_residual(f.s(k, l), f.s(k + 1, l), f.s(k, l + 1), f.l(k, l), f.m(k, l),
                                                     half_tan(f.delta1[k]), half_tan(f.delta2[l]), e));
    }
  }
  return worst;
}

EdgeLax horizontal_lax(const CknetLaxField& f, double t) {
  return [&f, t](int k, int l) { return lax_L(f.s(k, l), f.s(k + 1, l), f.l(k, l), f.delta1[k], t).lax(); };
}

EdgeLax vertical_lax(const CknetLaxField& f, double t) {
  return [&f, t](int k, int l) { return lax_M(f.s(k, l), f.s(k, l + 1), f.m(k, l), f.delta2[l], t).lax(); };
}

Integrated integrate(const CknetLaxField& field, double t, double tol) {
  field.check_invariants();
  const double r = field_residual(field);
  if (r > tol) {
    std::ostringstream os;
    os << "compatibility residual " << r << " exceeds " << tol;
    throw Error(ErrorKind::IncompatibleField, os.str());
  }
  Integrated out{propagate_frame(field.dims, t, horizontal_lax(field, t), vertical_lax(field, t)),
                 QuadNet(field.dims)};
  out.net = sym_net(out.frame);
  out.net.meta() = {{"generator", "cklax"}, {"t", t}};
  return out;
}

// --- circular quads -----------------------------------------------------

CircularQuadData CircularQuadData::from_points(const Vec3& f, const Vec3& f1, const Vec3& f2, const Vec3& n) {
  const Vec3 a = f1 - f;
  const Vec3 b = f2 - f;
  const double scale = std::max({norm(a), norm(b), 1.0});
  if (norm(a) < tol::kZeroEdge * scale || norm(b) < tol::kZeroEdge * scale ||
      norm(f1 - f2) < tol::kZeroEdge * scale) {
    throw Error(ErrorKind::CoincidentVertices, "two of the three given vertices coincide");
  }
  const Vec3 ab = cross(a, b);
  if (norm(ab) < tol::kTight * norm(a) * norm(b)) {
    throw Error(ErrorKind::NonConcircular, "the three given vertices are collinear");
  }
  CircularQuadData q;
  q.f = f;
  q.f1 = f1;
  q.f2 = f2;
  q.n = normalized(n);
  q.center = f + (cross(ab, a) * dot(b, b) + cross(b, ab) * dot(a, a)) / (2.0 * dot(ab, ab));
  q.r = norm(f - q.center);
  q.ez = normalized(ab);
  q.ex = (f - q.center) / q.r;
  q.ey = cross(q.ez, q.ex);
  q.phi = std::arg(q.to_plane(f));
  q.phi1 = std::arg(q.to_plane(f1));
  q.phi2 = std::arg(q.to_plane(f2));
  q.alpha = std::acos(std::clamp(dot(q.n, q.ez), -1.0, 1.0));
  q.beta = std::atan2(dot(q.n, q.ey), dot(q.n, q.ex));
  q.d = {norm(a), norm(b)};
  q.cos_phi = {dot(a, q.n) / q.d[0], dot(b, q.n) / q.d[1]};
  return q;
}

cplx CircularQuadData::to_plane(const Vec3& p) const {
  const Vec3 v = p - center;
  return {dot(v, ex), dot(v, ey)};
}

Vec3 CircularQuadData::to_world(cplx z) const { return center + ex * z.real() + ey * z.imag(); }

Vec3 CircularQuadData::fourth_vertex() const {
  const double sa2 = std::sin(alpha) * std::sin(alpha);
  const cplx z = r * std::exp(-kI * (phi - phi1 - phi2)) * (r * r + sa2 * std::exp(2.0 * kI * (phi - beta))) /
                 (r * r + sa2 * std::exp(-2.0 * kI * (phi - beta)));
  return to_world(z);
}

double CircularQuadData::curvature(double phi12) const {
  const double sa = std::sin(alpha);
  const double den = std::sin(0.5 * (phi - phi1 + phi12 - phi2));
  if (std::abs(den) < tol::kDenominator) throw Error(ErrorKind::DegenerateQuad, "curvature formula is singular");
  return sa * sa * std::sin(0.5 * (4 * beta - 3 * phi - phi1 + phi12 - phi2)) / den / (r * r);
}

Vec3 parallel_normal(const Vec3& n, const Vec3& f, const Vec3& fi) {
  const Vec3 e = fi - f;
  const double ee = dot(e, e);
  if (ee < tol::kZeroEdge * tol::kZeroEdge) throw Error(ErrorKind::ZeroEdge, "edge has zero length");
  return n - e * (2.0 * dot(n, e) / ee);
}

QuadNet FitResult::reconstruct() const {
  const auto local = integrate(field, 0.0).net;
  QuadNet out(Dims{2, 2});
  for (int l = 0; l < 2; ++l) {
    for (int k = 0; k < 2; ++k) {
      out.f(k, l) = origin + mul_transposed(rotation, local.f(k, l));
      out.n(k, l) = mul_transposed(rotation, local.n(k, l));
    }
  }
  return out;
}

FitResult fit_quad(const CircularQuadData& q, double rho) {
  if (std::abs(std::sin(q.alpha)) < tol::kAngle) {
    throw Error(ErrorKind::NoSolution, "normal is perpendicular to the circle plane; K = -1 is unreachable");
  }
  FitResult out;
  out.rho = rho;
  out.origin = q.f;
  out.rotation = rotation_to_e3(q.n);
  out.f12 = q.fourth_vertex();
  const Vec3 n1 = parallel_normal(q.n, q.f, q.f1);
  const Vec3 n2 = parallel_normal(q.n, q.f, q.f2);
  out.normals = {n1, n2, parallel_normal(n1, q.f1, out.f12)};

  const Vec3 e3{0, 0, 1};
  const cplx s = std::exp(kI * rho);
  std::array<cplx, 2> edge_var{};
  for (int i = 0; i < 2; ++i) {
    const Vec3 e = mul_rows(out.rotation, (i == 0 ? q.f1 : q.f2) - q.f);
    const double d = norm(e);
    const double cphi = e.z / d;
    const Vec3 target_n = e3 - e * (2.0 * e.z / dot(e, e));
    const double sd = std::sqrt(d * d / 4 + cphi * cphi);

    std::vector<cplx> deltas;
    if (sd <= 1.0) {
      const double a = std::asin(sd);
      deltas = {a, -a};
    } else {
      const cplx a = std::asin(cplx(sd, 0.0));
      deltas = {a, -a, std::conj(a), -std::conj(a)};
    }
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& delta : deltas) {
      const double x = std::clamp((-cphi / std::sin(delta)).real(), -1.0, 1.0);
      const double a = std::asin(x);
      for (double half : {a, M_PI - a}) {
        const double ri = std::remainder(-rho + 2 * half, 2 * M_PI);
        double len = 1.0;
        try {
          len = ell_length(rho, ri, delta);
        } catch (const Error&) {
          continue;
        }
        CknetLaxEval ev;
        try {
          ev = lax_L(s, std::exp(kI * ri), len, delta, 0.0);
        } catch (const Error&) {
          continue;
        }
        const Biquat inv = inverse(ev.mat);
        Vec3 e0, n0;
        try {
          e0 = 2.0 * trace_free(inv * ev.dmat, 1e-6);
          n0 = trace_free(inv * Biquat::basis(3) * ev.mat, 1e-6);
        } catch (const Error&) {
          continue;
        }
        const double g = std::atan2(e0.x * e.y - e0.y * e.x, e0.x * e.x + e0.y * e.y);
        const double err = max_abs(rotate_z(g, e0) - e) + max_abs(rotate_z(g, n0) - target_n);
        if (err < best) {
          best = err;
          out.delta[i] = delta;
          out.rho_i[i] = ri;
          edge_var[i] = len * std::exp(kI * g);
        }
      }
    }
    if (!std::isfinite(best)) throw Error(ErrorKind::NegativeRadicand, "no admissible branch for edge");
  }

  CknetLaxField field(Dims{2, 2});
  field.s(0, 0) = s;
  field.s(1, 0) = std::exp(kI * out.rho_i[0]);
  field.s(0, 1) = std::exp(kI * out.rho_i[1]);
  field.l(0, 0) = edge_var[0];
  field.m(0, 0) = edge_var[1];
  field.delta1 = {out.delta[0]};
  field.delta2 = {out.delta[1]};
  out.field = complete_field(field);
  return out;
}

}  // namespace cknet::cklax
