#include "cknet/backlund.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace cknet::backlund {

namespace {

void check_den(cplx den, const char* what) {
  if (!(std::abs(den) > tol::kDenominator)) {
    throw Error(ErrorKind::DegenerateEvolution, std::string("vanishing denominator in ") + what);
  }
}

Vec3 transformed_point(const Biquat& phi, const Vec3& f, cplx s, cplx st, double alpha, double t) {
  const Biquat x = Biquat::from_matrix({0.0, kI * s / st, kI * st / s, 0.0});
  return f + distance_factor(alpha, t) * trace_free(inverse(phi) * x * phi);
}

Vec3 transformed_normal(const Biquat& phi, cplx s, cplx st, double alpha, double t) {
  return conjugate_normal(bt_matrix(s, st, alpha, t).mat * phi);
}

double max_diff(const QuadNet& a, const QuadNet& b, bool normals) {
  double worst = 0.0;
  for (int l = 0; l < a.L(); ++l) {
    for (int k = 0; k < a.K(); ++k) {
      worst = std::max(worst, normals ? norm(a.n(k, l) - b.n(k, l)) : norm(a.f(k, l) - b.f(k, l)));
    }
  }
  return worst;
}

}  // namespace

void Params::check() const {
  if (!(std::abs(alpha) < M_PI) || std::abs(std::sin(alpha)) < tol::kAngle) {
    std::ostringstream os;
    os << "Baecklund angle " << alpha << " must lie in (-pi, pi) without 0";
    throw Error(ErrorKind::DegenerateAngle, os.str());
  }
}

Step bt_step(cplx st, cplx s, cplx s1, cplx l, cplx t1, double alpha) {
  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);
  const cplx ss = s * s1;
  const cplx q = t1 * t1;
  // s_next = (A st + B) / (C st + D)
  const cplx A = sa * (ss + q), B = -l * t1 * ((ss - 1.0) * ca + ss + 1.0);
  const cplx C = l * t1 * ((ss - 1.0) * ca - ss - 1.0), D = l * l * sa * (ss * q + 1.0);
  const cplx den = C * st + D;
  check_den(den, "s~ step");
  const double c = 1.0 / std::tan(alpha / 2);
  const cplx eden = l - st * t1 * c;
  check_den(eden, "transformed edge");
  return {(A * st + B) / den, s * (st - l * t1 * c) / eden, std::abs((A * D - B * C) / (den * den))};
}

Field evolve(const CknetLaxField& base, const Params& p, Order order) {
  p.check();
  const auto [K, L] = base.dims;
  Field out{Grid<cplx>(K, L), Grid<cplx>(K - 1, L), Grid<cplx>(K, L - 1)};
  auto& st = out.s_tilde;
  st(0, 0) = std::exp(kI * p.theta);
  const auto along_k = [&](int k, int l) {
    return bt_step(st(k, l), base.s(k, l), base.s(k + 1, l), base.l(k, l), cklax::half_tan(base.delta1[k]), p.alpha);
  };
  const auto along_l = [&](int k, int l) {
    return bt_step(st(k, l), base.s(k, l), base.s(k, l + 1), base.m(k, l), cklax::half_tan(base.delta2[l]), p.alpha);
  };
  if (order == Order::KThenL) {
    for (int k = 0; k + 1 < K; ++k) st(k + 1, 0) = along_k(k, 0).s_next;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l + 1 < L; ++l) st(k, l + 1) = along_l(k, l).s_next;
    }
  } else if (order == Order::Adaptive) {
    // bound(k, l): accumulated rounding at s~(k, l) in units of one step.
    Grid<double> bound(K, L);
    bound(0, 0) = 1.0;
    for (int l = 0; l < L; ++l) {
      for (int k = 0; k < K; ++k) {
        if (k == 0 && l == 0) continue;
        double best = std::numeric_limits<double>::infinity();
        if (k > 0) {
          const Step s = along_k(k - 1, l);
          best = bound(k - 1, l) * s.gain + 1.0;
          st(k, l) = s.s_next;
        }
        if (l > 0) {
          const Step s = along_l(k, l - 1);
          const double b = bound(k, l - 1) * s.gain + 1.0;
          if (b < best) {
            best = b;
            st(k, l) = s.s_next;
          }
        }
        bound(k, l) = best;
      }
    }
  } else {
    for (int l = 0; l + 1 < L; ++l) st(0, l + 1) = along_l(0, l).s_next;
    for (int l = 0; l < L; ++l) {
      for (int k = 0; k + 1 < K; ++k) st(k + 1, l) = along_k(k, l).s_next;
    }
  }
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k + 1 < K; ++k) out.l_tilde(k, l) = along_k(k, l).edge;
  }
  for (int l = 0; l + 1 < L; ++l) {
    for (int k = 0; k < K; ++k) out.m_tilde(k, l) = along_l(k, l).edge;
  }
  return out;
}

CknetLaxField transformed_field(const CknetLaxField& base, const Field& bt) {
  CknetLaxField f(base.dims);
  f.s = bt.s_tilde;
  f.l = bt.l_tilde;
  f.m = bt.m_tilde;
  f.delta1 = base.delta1;
  f.delta2 = base.delta2;
  return f;
}

LaxEval bt_matrix(cplx s, cplx st, double alpha, double t) {
  const double c = 1.0 / std::tan(alpha / 2);
  const cplx lam = std::exp(t);
  const cplx g = st / s;
  return {Biquat::from_matrix({c * g, kI * lam, kI * lam, c / g}),
          Biquat::from_matrix({0.0, kI * lam, kI * lam, 0.0})};
}

FrameState transform_frame(const FrameState& frame, const CknetLaxField& base, const Field& bt, double alpha) {
  const Dims dims = frame.dims();
  FrameState out(dims, frame.t);
  for (int l = 0; l < dims.L; ++l) {
    for (int k = 0; k < dims.K; ++k) {
      const LaxEval u = bt_matrix(base.s(k, l), bt.s_tilde(k, l), alpha, frame.t);
      out.phi(k, l) = u.mat * frame.phi(k, l);
      out.phi_dot(k, l) = u.dmat * frame.phi(k, l) + u.mat * frame.phi_dot(k, l);
    }
  }
  return out;
}

double distance_factor(double alpha, double t) {
  return std::sin(alpha) / (std::cosh(t) - std::cos(alpha) * std::sinh(t));
}

double normal_angle(double alpha, double t) {
  const double den = std::cosh(t) - std::cos(alpha) * std::sinh(t);
  return std::acos(std::clamp((std::cos(alpha) * std::cosh(t) - std::sinh(t)) / den, -1.0, 1.0));
}

QuadNet immerse(const FrameState& frame, const QuadNet& base_net, const CknetLaxField& base, const Field& bt,
                double alpha) {
  const Dims dims = frame.dims();
  if (!(base_net.dims() == dims) || !(base.dims == dims) || bt.s_tilde.K() != dims.K || bt.s_tilde.L() != dims.L) {
    throw Error(ErrorKind::DimensionMismatch, "frame, net and transform field windows differ");
  }
  QuadNet out(dims);
  for (int l = 0; l < dims.L; ++l) {
    for (int k = 0; k < dims.K; ++k) {
      const cplx s = base.s(k, l);
      const cplx st = bt.s_tilde(k, l);
      out.f(k, l) = transformed_point(frame.phi(k, l), base_net.f(k, l), s, st, alpha, frame.t);
      out.n(k, l) = transformed_normal(frame.phi(k, l), s, st, alpha, frame.t);
    }
  }
  out.meta() = {{"generator", "backlund"}, {"alpha", alpha}, {"t", frame.t}};
  return out;
}

Transformed transform(const CknetLaxField& base, const FrameState& frame, const Params& p) {
  const Field bt = evolve(base, p);
  FrameState tf = transform_frame(frame, base, bt, p.alpha);
  QuadNet net = sym_net(tf);
  net.meta() = {{"generator", "backlund"}, {"alpha", p.alpha}, {"theta", p.theta}, {"t", frame.t}};
  return {transformed_field(base, bt), std::move(tf), std::move(net)};
}

DoubleField double_evolve(const CknetLaxField& base, const DoubleParams& p) {
  const auto [K, L] = base.dims;
  DoubleField out{Grid<cplx>(K, L), Grid<cplx>(K, L)};
  out.s_b(0, 0) = p.s_b0;
  out.s_db(0, 0) = p.s_db0;
  const auto step = [&](cplx s, cplx s1, cplx edge, cplx th, cplx sb, cplx sdb) {
    const auto e = cklax::evolve_quad_tan(s, s1, sdb, edge, sb, th, p.tan_half);
    return std::pair{e.m1, e.s12};
  };
  for (int k = 0; k + 1 < K; ++k) {
    std::tie(out.s_b(k + 1, 0), out.s_db(k + 1, 0)) = step(base.s(k, 0), base.s(k + 1, 0), base.l(k, 0),
                                                           cklax::half_tan(base.delta1[k]), out.s_b(k, 0),
                                                           out.s_db(k, 0));
  }
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l + 1 < L; ++l) {
      std::tie(out.s_b(k, l + 1), out.s_db(k, l + 1)) = step(base.s(k, l), base.s(k, l + 1), base.m(k, l),
                                                             cklax::half_tan(base.delta2[l]), out.s_b(k, l),
                                                             out.s_db(k, l));
    }
  }
  return out;
}

QuadNet double_transform(const CknetLaxField& base, const FrameState& frame, const DoubleParams& p) {
  const DoubleField d = double_evolve(base, p);
  const Dims dims = frame.dims();
  FrameState out(dims, frame.t);
  for (int l = 0; l < dims.L; ++l) {
    for (int k = 0; k < dims.K; ++k) {
      const auto b = cklax::lax_from_tan(base.s(k, l), d.s_db(k, l), d.s_b(k, l), p.tan_half, frame.t);
      out.phi(k, l) = b.mat * frame.phi(k, l);
      out.phi_dot(k, l) = b.dmat * frame.phi(k, l) + b.mat * frame.phi_dot(k, l);
    }
  }
  QuadNet net = sym_net(out);
  net.meta() = {{"generator", "double-backlund"},
                {"tan_half", {p.tan_half.real(), p.tan_half.imag()}},
                {"t", frame.t}};
  return net;
}

nlohmann::json BianchiReport::to_json() const {
  return {{"alpha_hat", alpha_hat},
          {"alpha_tilde", alpha_tilde},
          {"theta_hat_tilde", theta_hat_tilde},
          {"theta_tilde_hat", theta_tilde_hat},
          {"position_residual", position_residual},
          {"normal_residual", normal_residual},
          {"ok", ok}};
}

BianchiReport bianchi_check(const CknetLaxField& base, const FrameState& frame, const Params& hat,
                            const Params& tilde, double t, double tol) {
  if (std::abs(frame.t - t) > 0.0) throw Error(ErrorKind::DimensionMismatch, "frame and requested t differ");
  const Transformed fh = transform(base, frame, hat);
  const Transformed ft = transform(base, frame, tilde);

  const double c_hat = distance_factor(hat.alpha, t);
  const Biquat& phi_h = fh.frame.phi(0, 0);
  const Biquat& phi_t = ft.frame.phi(0, 0);
  const Vec3 target = ft.net.f(0, 0);
  const auto gap = [&](double theta) {
    const Vec3 p =
        transformed_point(phi_h, fh.net.f(0, 0), fh.field.s(0, 0), std::exp(kI * theta), tilde.alpha, t);
    const Vec3 d = p - target;
    return dot(d, d) - c_hat * c_hat;
  };

  // Candidate phases: bracketed roots of the distance equation, or the grid
  // minimum when it has no sign change.
  constexpr int kSamples = 720;
  std::vector<double> candidates;
  double best_abs = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  double prev_theta = -M_PI;
  double prev = gap(prev_theta);
  for (int i = 1; i <= kSamples; ++i) {
    const double th = -M_PI + 2 * M_PI * i / kSamples;
    const double g = gap(th);
    if (std::abs(g) < best_abs) {
      best_abs = std::abs(g);
      best_theta = th;
    }
    if ((prev < 0) != (g < 0)) {
      double a = prev_theta, b = th, ga = prev;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = gap(mid);
        if ((gm < 0) == (ga < 0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
      }
      candidates.push_back(0.5 * (a + b));
    }
    prev_theta = th;
    prev = g;
  }
  if (candidates.empty()) candidates.push_back(best_theta);

  BianchiReport best;
  best.alpha_hat = hat.alpha;
  best.alpha_tilde = tilde.alpha;
  best.position_residual = std::numeric_limits<double>::infinity();
  for (double th1 : candidates) {
    try {
      const Transformed a = transform(fh.field, fh.frame, {tilde.alpha, th1});
      const Vec3 w = (a.net.f(0, 0) - target) / c_hat;
      const Mat2 y = (phi_t * Biquat::embed(w) * inverse(phi_t)).matrix();
      const cplx x = ft.field.s(0, 0) * y.c / kI;
      const double th2 = std::arg(x);
      const Transformed b = transform(ft.field, ft.frame, {hat.alpha, th2});
      const double pr = max_diff(a.net, b.net, false);
      if (pr < best.position_residual) {
        best.theta_hat_tilde = th1;
        best.theta_tilde_hat = th2;
        best.position_residual = pr;
        best.normal_residual = max_diff(a.net, b.net, true);
      }
    } catch (const Error&) {
      continue;
    }
  }
  best.ok = best.position_residual < tol && best.normal_residual < tol;
  return best;
}

}  // namespace cknet::backlund
