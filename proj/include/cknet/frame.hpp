#pragma once

// Joint propagation of (Phi, dPhi/dt) across a window. Each transition
// matrix is rescaled to unit determinant first; the scalar this adds to
// Phi^{-1} dPhi is a multiple of the identity and drops out of the Sym
// formula, so positions are unchanged while magnitudes stay bounded.

#include <functional>

#include "cknet/lattice.hpp"

namespace cknet {

/// A transition matrix and its analytic derivative in t (lambda = e^t).
struct LaxEval {
  Biquat mat;
  Biquat dmat;
};

using EdgeLax = std::function<LaxEval(int k, int l)>;

/// Phi(0,0) = 1, dPhi(0,0) = 0; along k on row 0, then along l in every
/// column. `horizontal(k, l)` maps (k,l) -> (k+1,l), `vertical(k, l)` maps
/// (k,l) -> (k,l+1).
FrameState propagate_frame(Dims dims, double t, const EdgeLax& horizontal, const EdgeLax& vertical);

/// One step: returns (N Phi, dN Phi + N dPhi) with N = A / sqrt(det A).
std::pair<Biquat, Biquat> frame_step(const Biquat& phi, const Biquat& dphi, const LaxEval& a);

/// max over quads of |V1 U - U2 V| relative to max(1, |V1| |U|), evaluated
/// on the unnormalized matrices.
double zero_curvature_residual(Dims dims, const EdgeLax& horizontal, const EdgeLax& vertical);

}  // namespace cknet
