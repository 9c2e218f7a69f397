#pragma once

// Closed-form nets: the straight line and its associated family, its single
// and double Baecklund transforms (Dini, Beltrami pseudosphere, breather,
// Kuen) and the tractrix pseudosphere of revolution.

#include <functional>
#include <optional>

#include "cknet/lattice.hpp"

namespace cknet::closed_form {

/// Vertex (i, j) of the window is lattice point (k0 + i, l0 + j).
struct Window {
  Dims dims{1, 1};
  int k0 = 0;
  int l0 = 0;
};

/// Parameter line functions delta1(k) and delta2(l).
struct Deltas {
  std::function<double(int)> d1;
  std::function<double(int)> d2;

  static Deltas constant(double delta1, double delta2);
  /// Throws DegenerateAngle when sin(delta1) vanishes somewhere in the window.
  void check(const Window& w) const;
};

// Auxiliary fields. Negative indices use the reversed sums and products.
double x_field(int k, int l, double t, const Deltas& d);
cplx omega(int k, int l, double t, const Deltas& d);
cplx chi(int k, int l, double alpha, double theta, const Deltas& d);

/// s~ of the line's alpha-transform: (-1)^l (-1 + 2 / (1 - i e^chi)).
cplx line_bt_s(int k, int l, double alpha, double theta, const Deltas& d);

/// Lax data of the line: s = l = m = (-1)^l on a window starting at (0, 0).
CknetLaxField line_lax_field(Dims dims, const Deltas& d);

/// f0 = (-2x, 0, 0), n0 = (0, Im omega, Re omega).
QuadNet gen_line(const Window& w, const Deltas& d, double t);

/// Dini family: the alpha-transform of the line with s~(0,0) = e^{i theta}.
QuadNet gen_dini(const Window& w, double alpha, double theta, const Deltas& d, double t);

/// Associated family of the Beltrami pseudosphere (the alpha = -pi/2 case).
QuadNet gen_pseudosphere_family(const Window& w, double theta, const Deltas& d, double t);

/// Breather: complex double transform with tan(delta/2) = e^{i mu}.
QuadNet gen_breather(const Window& w, double mu, double delta1, double delta2, double t);

/// Kuen's surface, the mu -> 0 limit of the breather.
QuadNet gen_kuen(const Window& w, double delta1, double delta2, double t);

/// kappa = 2 arctan(sin mu tan delta2).
double breather_kappa(double mu, double delta2);
/// mu = -arcsin(cot(delta2) tan(q delta2)).
double breather_mu(double q, double delta2);
/// Smallest P > 0 with P kappa = 0 mod 2 pi, or nullopt when kappa / pi is
/// not a fraction with denominator up to `max_den`.
std::optional<int> breather_period(double mu, double delta2, int max_den = 10000);

/// Surface of revolution of the tractrix of the line p_k = (eps k, 0) with
/// d = 1. Throws InvalidStep unless 0 < eps < 2 and phi_steps >= 1.
QuadNet gen_tractrix_pseudosphere(const Window& w, double epsilon, int phi_steps);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct TractrixData {
  std::vector<Point2> p;
  std::vector<Point2> p_hat;
  std::vector<Point2> p_tilde;
  std::vector<Point2> normals;
  double d = 0.0;  // |p^ - p| = 2d
};

/// Discrete Darboux transform of a planar polygon: p^_{k+1} is p_k reflected
/// across the perpendicular bisector of [p_{k+1}, p^_k]. Throws NoSolution
/// when that bisector is undefined and ZeroEdge for a vanishing edge.
TractrixData gen_darboux_tractrix(const std::vector<Point2>& p, Point2 start);

/// Rotates the tractrix about the x axis in phi_steps equal steps.
QuadNet revolve(const TractrixData& data, int L, int phi_steps);

}  // namespace cknet::closed_form
