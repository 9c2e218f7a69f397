#pragma once

// Geometric checks for quad nets with vertex normals.

#include <set>
#include <string>
#include <vector>

#include "cknet/lattice.hpp"

namespace cknet::validate {

struct EdgeResidual {
  int k = 0;
  int l = 0;
  int dir = 0;  // 0: (k,l)->(k+1,l), 1: (k,l)->(k,l+1)
  double value = 0.0;
};

/// |(f_i - f).(n_i + n)| / (|f_i - f| |n_i + n|) for every edge, horizontal
/// edges first. Throws ZeroEdge. Antipodal normals (n_i + n = 0) give 0.
std::vector<EdgeResidual> edge_constraint_residual(const QuadNet& net);
double max_edge_constraint(const QuadNet& net);

/// (n12 - n) x (n2 - n1) normalized, or the cross product of the position
/// diagonals when it is shorter than 1e-12 |n12 - n| |n2 - n1|. Throws
/// DegenerateQuad when both vanish.
Vec3 face_normal(const QuadNet& net, int k, int l);

/// det(n12 - n, n2 - n1, N) / det(f12 - f, f2 - f1, N). Throws DegenerateQuad
/// when the denominator is exactly zero.
double gauss_curvature(const QuadNet& net, int k, int l);

/// Signed H under the face-normal rule above; flipping N leaves it unchanged,
/// swapping the lattice directions flips it.
double mean_curvature(const QuadNet& net, int k, int l);

/// |Im cr| / |cr| for cr = (f - f1)(f1 - f12)^{-1}(f12 - f2)(f2 - f)^{-1}.
/// Throws CoincidentVertices.
double circularity(const QuadNet& net, int k, int l);

enum class Direction { K, L };

/// Largest distance of the polygon's vertices to its best-fit plane.
/// Direction::K walks k at fixed l = index; Direction::L walks l at fixed k.
double polygon_planarity(const QuadNet& net, Direction dir, int index);

struct QuadReport {
  double K = 0.0;
  double H = 0.0;
  Vec3 face_normal;
  double cross_ratio_im = 0.0;
  double planarity = 0.0;  // distance of f12 to the plane through f, f1, f2
  double edge_constraint_max = 0.0;
};

QuadReport quad_report(const QuadNet& net, int k, int l);

struct Isometry {
  std::array<Vec3, 3> rows{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  Vec3 shift;

  Vec3 rotate(const Vec3& v) const { return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v)}; }
  Vec3 operator()(const Vec3& v) const { return rotate(v) + shift; }
};

struct Congruence {
  Isometry motion;
  double residual = 0.0;         // positions
  double normal_residual = 0.0;  // normals under the rotation part
};

/// Aligns the tangent frames of a and b at (0,0) and measures the worst
/// pointwise mismatch. Throws DimensionMismatch or DegenerateFrame.
Congruence congruent_up_to_rigid_motion(const QuadNet& a, const QuadNet& b);

/// Applies x -> c R x + shift to positions and R to normals.
QuadNet transformed(const QuadNet& net, const Isometry& m, double scale = 1.0);
/// Mirror image in the plane y = 0.
QuadNet reflected(const QuadNet& net);

struct Tolerances {
  double edge = 1e-8;
  double curvature = 1e-8;
  double circularity = 1e-8;
  double target_K = -1.0;
};

inline const std::set<std::string>& known_checks() {
  static const std::set<std::string> names{"edge-constraint", "curvature", "circularity"};
  return names;
}

/// JSON report with per-check max residual, failing indices and pass flag.
/// Throws ParseError for unknown check names.
nlohmann::json validation_report(const QuadNet& net, const std::set<std::string>& checks, const Tolerances& tol);

}  // namespace cknet::validate
