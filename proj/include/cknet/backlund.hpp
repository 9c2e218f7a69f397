#pragma once

// Baecklund transformations of cK-nets: the frame is multiplied by a K-net
// matrix U(alpha) built from the old and new vertex variables.

#include "cknet/cklax.hpp"

namespace cknet::backlund {

/// Real single transform: alpha in (-pi, pi) \ {0}, s~(0,0) = e^{i theta}.
struct Params {
  double alpha = M_PI / 2;
  double theta = M_PI / 2;

  /// Throws DegenerateAngle for alpha outside (-pi, pi) \ {0}.
  void check() const;
};

/// Transformed Lax variables on the same window as the base field.
struct Field {
  Grid<cplx> s_tilde;
  Grid<cplx> l_tilde;
  Grid<cplx> m_tilde;
};

struct Step {
  cplx s_next;  // s~ at the far end of the edge
  cplx edge;    // transformed edge variable
  double gain;  // |d s_next / d s~|
};

/// One edge of U1 L = L~ U (or U2 M = M~ U); `tan_half` belongs to the edge.
Step bt_step(cplx s_tilde, cplx s, cplx s_next, cplx edge, cplx tan_half, double alpha);

/// Adaptive reaches each vertex from whichever neighbour (k - 1 or l - 1)
/// carries the smaller propagated rounding bound, using the step gains. All
/// orders agree in exact arithmetic.
enum class Order { KThenL, LThenK, Adaptive };

/// Throws DegenerateEvolution.
Field evolve(const CknetLaxField& base, const Params& p, Order order = Order::Adaptive);

/// The transformed field (s~, l~, m~) with the base deltas.
CknetLaxField transformed_field(const CknetLaxField& base, const Field& bt);

/// U = [[cot(alpha/2) s~/s, i lambda], [i lambda, cot(alpha/2) s/s~]].
LaxEval bt_matrix(cplx s, cplx s_tilde, double alpha, double t);

/// Phi~ = U Phi with dPhi~ = dU Phi + U dPhi.
FrameState transform_frame(const FrameState& frame, const CknetLaxField& base, const Field& bt, double alpha);

/// sin(alpha) / (cosh t - cos(alpha) sinh t): |f~ - f| at lambda = e^t.
double distance_factor(double alpha, double t);
/// Angle between n and n~ at lambda = e^t.
double normal_angle(double alpha, double t);

/// f~ = f + distance_factor [Phi^{-1} X Phi], X = [[0, i s/s~], [i s~/s, 0]],
/// n~ = -i Phi^{-1} U^{-1} s3 U Phi.
QuadNet immerse(const FrameState& frame, const QuadNet& base_net, const CknetLaxField& base, const Field& bt,
                double alpha);

struct Transformed {
  CknetLaxField field;
  FrameState frame;
  QuadNet net;
};

/// Evolve, transform the frame and immerse in one go.
Transformed transform(const CknetLaxField& base, const FrameState& frame, const Params& p);

// --- double transforms ---------------------------------------------------

/// Double transform data: the B matrix uses tan(delta/2) = tan_half, which
/// is e^{i mu} for the breather and tan(alpha/2) for a real pair.
struct DoubleParams {
  cplx tan_half = 1.0;
  cplx s_b0 = kI;
  cplx s_db0 = 1.0;

  static DoubleParams from_mu(double mu) { return {std::exp(kI * mu), kI, 1.0}; }
  static DoubleParams from_alpha(double alpha) { return {std::tan(alpha / 2), kI, 1.0}; }
};

struct DoubleField {
  Grid<cplx> s_b;
  Grid<cplx> s_db;
};

/// Throws DegenerateEvolution.
DoubleField double_evolve(const CknetLaxField& base, const DoubleParams& p);

/// Phi^ = B Phi with B = L(s, s_db, s_b) at tan_half; returns the Sym net.
QuadNet double_transform(const CknetLaxField& base, const FrameState& frame, const DoubleParams& p);

// --- permutability -------------------------------------------------------

struct BianchiReport {
  double alpha_hat = 0.0;
  double alpha_tilde = 0.0;
  double theta_hat_tilde = 0.0;  // phase of the alpha~ transform of f^
  double theta_tilde_hat = 0.0;  // phase of the alpha^ transform of f~
  double position_residual = 0.0;
  double normal_residual = 0.0;
  bool ok = false;

  nlohmann::json to_json() const;
};

/// Solves for the phase of the fourth net so that the alpha~ transform of
/// f^ and the alpha^ transform of f~ coincide, then measures the mismatch
/// over the window.
BianchiReport bianchi_check(const CknetLaxField& base, const FrameState& frame, const Params& hat,
                            const Params& tilde, double t = 0.0, double tol = tol::kGeometric);

}  // namespace cknet::backlund
