#pragma once

// Circular K-nets from the L, M Lax pair. L and M share one form:
//   L(s, s1, l) = [[cot l/s + tan l s1, i(lambda - s s1/lambda)],
//                  [i(lambda - 1/(lambda s s1)), cot s/l + tan/(l s1)]]
// with tan = tan(delta/2) and cot = 1/tan. The half-angle tangent is the
// primary parameter so that unitary values (complex delta) pass through.

#include <array>

#include "cknet/frame.hpp"

namespace cknet::cklax {

/// tan(delta/2) for a possibly complex angle.
cplx half_tan(cplx delta);

struct CknetLaxEval {
  Biquat mat;
  Biquat dmat;
  cplx det;
  LaxEval lax() const { return {mat, dmat}; }
};

/// Throws DegenerateAngle when the half-angle tangent is zero or infinite.
CknetLaxEval lax_from_tan(cplx s, cplx s1, cplx l, cplx tan_half, double t);
CknetLaxEval lax_L(cplx s, cplx s1, cplx l, cplx delta1, double t);
CknetLaxEval lax_M(cplx s, cplx s2, cplx m, cplx delta2, double t);

/// lambda^2 + lambda^-2 + tan^2 + cot^2.
cplx expected_det(cplx tan_half, double t);

/// Modulus of the edge variable that keeps L quaternionic. Throws
/// NegativeRadicand.
double ell_length(double rho, double rho_i, cplx delta_i);

struct Evolved {
  cplx l2;
  cplx m1;
  cplx s12;
};

/// Solves M1 L = L2 M for (l2, m1, s12). Throws DegenerateEvolution naming
/// the failing output.
Evolved evolve_quad_tan(cplx s, cplx s1, cplx s2, cplx l, cplx m, cplx t1, cplx t2);
Evolved evolve_quad(cplx s, cplx s1, cplx s2, cplx l, cplx m, cplx delta1, cplx delta2);

/// max over lambda in {1/2, 1, 2} of |M1 L - L2 M| relative to the entry scale.
double compatibility_residual(cplx s, cplx s1, cplx s2, cplx l, cplx m, cplx t1, cplx t2, const Evolved& e);

/// Fills s, l, m in the interior from s on row 0 and column 0, l on row 0,
/// m on column 0 and the delta arrays.
CknetLaxField complete_field(CknetLaxField field);

/// Largest compatibility residual over the quads of a complete field.
double field_residual(const CknetLaxField& field);

EdgeLax horizontal_lax(const CknetLaxField& field, double t);
EdgeLax vertical_lax(const CknetLaxField& field, double t);

struct Integrated {
  FrameState frame;
  QuadNet net;
};

/// Throws IncompatibleField when some quad exceeds `tol`.
Integrated integrate(const CknetLaxField& field, double t, double tol = tol::kDefault);

/// A circular quad given by f, f1, f2 and the normal n at f, in circle
/// coordinates: circumcenter origin, x axis through f, z the plane normal.
struct CircularQuadData {
  Vec3 f, f1, f2, n;
  Vec3 center, ex, ey, ez;
  double r = 0.0;
  double phi = 0.0, phi1 = 0.0, phi2 = 0.0;
  double alpha = 0.0, beta = 0.0;
  std::array<double, 2> d{};          // |f1 - f|, |f2 - f|
  std::array<double, 2> cos_phi{};    // (f_i - f).n / d

  /// Throws CoincidentVertices or NonConcircular (collinear points).
  static CircularQuadData from_points(const Vec3& f, const Vec3& f1, const Vec3& f2, const Vec3& n);

  /// The unique f12 giving K = -1 with parallel normals.
  Vec3 fourth_vertex() const;
  /// K for a trial fourth vertex at circle angle phi12.
  double curvature(double phi12) const;
  Vec3 to_world(cplx z) const;
  cplx to_plane(const Vec3& p) const;
};

/// Normal at `fi` parallel to `n` across the edge f -> fi.
Vec3 parallel_normal(const Vec3& n, const Vec3& f, const Vec3& fi);

struct FitResult {
  std::array<cplx, 2> delta{};
  double rho = 0.0;
  std::array<double, 2> rho_i{};
  CknetLaxField field{Dims{2, 2}};
  Vec3 f12;
  std::array<Vec3, 3> normals{};  // n1, n2, n12
  std::array<Vec3, 3> rotation{};  // rows of R with R n = e3
  Vec3 origin;                     // f

  /// Integrates the fitted 2x2 field at lambda = 1 and places it back in
  /// world coordinates.
  QuadNet reconstruct() const;
};

/// Recovers Lax data for the quad. Throws NoSolution when sin(alpha)
/// vanishes (K = -1 is unreachable) and NegativeRadicand.
FitResult fit_quad(const CircularQuadData& data, double rho_init = 0.0);

}  // namespace cknet::cklax
