#pragma once

// Asymptotic K-nets from the U, V Lax pair with Hirota phases H = e^{ih}.

#include "cknet/frame.hpp"

namespace cknet::knet {

/// U = [[cot(du/2) H1/H, i lambda], [i lambda, cot(du/2) H/H1]].
/// Throws DegenerateAngle when cot(du/2) is infinite or zero.
LaxEval lax_U(double h, double h1, double delta_u, double t);

/// V = [[1, (i/lambda) tan(dv/2) H2 H], [(i/lambda) tan(dv/2) / (H2 H), 1]].
LaxEval lax_V(double h, double h2, double delta_v, double t);

/// e^{i(h12+h)} - e^{i(h1+h2)} - tan(du/2) tan(dv/2) (1 - e^{i(h+h1+h12+h2)})
/// on the quad with lower-left corner (k, l).
cplx hirota_residual(const KnetField& field, int k, int l);

/// Solves the Hirota equation for h12, returned in (-pi, pi].
double solve_hirota(double h, double h1, double h2, double delta_u, double delta_v);

/// Fills the interior from h on row 0 and column 0.
KnetField complete_field(KnetField field);

struct Integrated {
  FrameState frame;
  QuadNet net;
};

/// Throws IncompatibleField when a quad violates Hirota or V1 U != U2 V
/// beyond `tol`.
Integrated integrate(const KnetField& field, double t, double tol = tol::kDefault);

/// -2 cosh^2 t (1 - cos du tanh t)(1 + cos dv tanh t) / (cos du + cos dv).
double quad_curvature(double delta_u, double delta_v, double t);

}  // namespace cknet::knet
