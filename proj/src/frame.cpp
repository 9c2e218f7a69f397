#include "cknet/frame.hpp"

#include <algorithm>

namespace cknet {

std::pair<Biquat, Biquat> frame_step(const Biquat& phi, const Biquat& dphi, const LaxEval& a) {
  const auto [n, dn] = normalize_unit_det(a.mat, a.dmat);
  return {n * phi, dn * phi + n * dphi};
}

FrameState propagate_frame(Dims dims, double t, const EdgeLax& horizontal, const EdgeLax& vertical) {
  FrameState frame(dims, t);
  frame.phi(0, 0) = Biquat::identity();
  frame.phi_dot(0, 0) = Biquat::zero();
  for (int k = 0; k + 1 < dims.K; ++k) {
    std::tie(frame.phi(k + 1, 0), frame.phi_dot(k + 1, 0)) =
        frame_step(frame.phi(k, 0), frame.phi_dot(k, 0), horizontal(k, 0));
  }
  for (int k = 0; k < dims.K; ++k) {
    for (int l = 0; l + 1 < dims.L; ++l) {
      std::tie(frame.phi(k, l + 1), frame.phi_dot(k, l + 1)) =
          frame_step(frame.phi(k, l), frame.phi_dot(k, l), vertical(k, l));
    }
  }
  return frame;
}

double zero_curvature_residual(Dims dims, const EdgeLax& horizontal, const EdgeLax& vertical) {
  double worst = 0.0;
  for (int l = 0; l + 1 < dims.L; ++l) {
    for (int k = 0; k + 1 < dims.K; ++k) {
      const Biquat u = horizontal(k, l).mat;
      const Biquat v1 = vertical(k + 1, l).mat;
      const Biquat v = vertical(k, l).mat;
      const Biquat u2 = horizontal(k, l + 1).mat;
      const double scale = std::max({1.0, v1.max_abs() * u.max_abs(), u2.max_abs() * v.max_abs()});
      worst = std::max(worst, (v1 * u - u2 * v).max_abs() / scale);
    }
  }
  return worst;
}

}  // namespace cknet
