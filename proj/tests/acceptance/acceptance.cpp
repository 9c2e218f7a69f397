// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cknet/backlund.hpp"
#include "cknet/closed_form.hpp"
#include "cknet/cklax.hpp"
#include "cknet/knet.hpp"
#include "cknet/validate.hpp"
#include "oracles.hpp"

using namespace cknet;
using closed_form::Deltas;
using closed_form::Window;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Window centred(int K, int L) { return Window{Dims{K, L}, -K / 2, -L / 2}; }

template <class F>
double max_quad(const QuadNet& net, F&& fn) {
  double worst = 0.0;
  for (int l = 0; l + 1 < net.L(); ++l) {
    for (int k = 0; k + 1 < net.K(); ++k) worst = std::max(worst, fn(k, l));
  }
  return worst;
}

double curvature_defect(const QuadNet& net) {
  return max_quad(net, [&](int k, int l) { return std::abs(validate::gauss_curvature(net, k, l) + 1.0); });
}

double max_circularity(const QuadNet& net) {
  return max_quad(net, [&](int k, int l) { return validate::circularity(net, k, l); });
}

oracle::M2 M(const Biquat& q) { return oracle::from(q.matrix()); }

// Generator nets shared by the curvature and edge-constraint criteria.
struct Sample {
  std::string name;
  QuadNet net;
};

std::vector<Sample> generator_samples() {
  std::vector<Sample> out;
  const auto dini_d = Deltas::constant(0.15, 0.1);
  const auto family_d = Deltas::constant(0.3, 0.2);
  for (double t : {-0.5, 0.0, 0.5}) {
    const std::string tag = fmt(" t=%.1f", t);
    out.push_back({"dini" + tag, closed_form::gen_dini(centred(20, 20), 1.2, 0.4, dini_d, t)});
    out.push_back({"pseudosphere-family" + tag, closed_form::gen_pseudosphere_family(centred(20, 20), 0.8, family_d, t)});
    out.push_back({"breather" + tag, closed_form::gen_breather(centred(20, 20), 0.9, 0.35, 0.3, t)});
    out.push_back({"kuen" + tag, closed_form::gen_kuen(centred(20, 20), 0.2, 0.25, t)});
  }
  out.push_back({"tractrix-pseudosphere", closed_form::gen_tractrix_pseudosphere(Window{Dims{20, 20}}, 1.0, 24)});
  return out;
}

Outcome ac1() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (const auto& s : generator_samples()) {
    const double d = curvature_defect(s.net);
    if (d >= worst) {
      worst = d;
      where = s.name;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-8 && secs < 5.0, fmt("max |K+1| = %.3g, %.2f s", worst, secs) + " (worst: " + where + ")"};
}

Outcome ac2() {
  const auto d = Deltas::constant(0.15, 0.1);
  const double at0 = max_circularity(closed_form::gen_dini(centred(20, 20), 1.2, 0.4, d, 0.0));
  const double at05 = max_circularity(closed_form::gen_dini(centred(20, 20), 1.2, 0.4, d, 0.5));
  return {at0 < 1e-9 && at05 > 1e-3, fmt("t=0: %.3g, t=0.5: %.3g", at0, at05)};
}

Outcome ac3() {
  double worst = 0.0;
  for (const auto& s : generator_samples()) worst = std::max(worst, validate::max_edge_constraint(s.net));
  return {worst < 1e-9, fmt("max residual = %.3g", worst)};
}

Outcome ac4() {
  oracle::Rng rng(1004);
  double dist_err = 0.0, pyth_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double alpha = rng.uniform(0.3, 2.8), t = rng.uniform(-1.0, 1.0), theta = rng.uniform(-M_PI, M_PI);
    const auto field = closed_form::line_lax_field(Dims{10, 10}, Deltas::constant(0.3, 0.2));
    const auto base = cklax::integrate(field, t);
    const auto tr = backlund::transform(field, base.frame, {alpha, theta});
    const double c = std::sin(alpha) / (std::cosh(t) - std::cos(alpha) * std::sinh(t));
    for (int l = 0; l < 10; ++l) {
      for (int k = 0; k < 10; ++k) {
        const double dist = norm(tr.net.f(k, l) - base.net.f(k, l));
        const double nn = dot(tr.net.n(k, l), base.net.n(k, l));
        dist_err = std::max(dist_err, std::abs(dist - c));
        pyth_err = std::max(pyth_err, std::abs(dist * dist + nn * nn - 1.0));
      }
    }
  }
  return {dist_err < 1e-9 && pyth_err < 1e-9, fmt("distance err %.3g, |d^2+(n.n)^2-1| %.3g", dist_err, pyth_err)};
}

Outcome ac5() {
  const Dims dims{12, 12};
  const auto line = [&](const Deltas& d) { return closed_form::line_lax_field(dims, d); };
  const auto single = [&](const Deltas& d, double alpha, double theta, double t) {
    const auto field = line(d);
    return backlund::transform(field, cklax::integrate(field, t).frame, {alpha, theta}).net;
  };
  const auto dbl = [&](double mu, double d1, double d2, double t) {
    const auto field = line(Deltas::constant(d1, d2));
    return backlund::double_transform(field, cklax::integrate(field, t).frame, backlund::DoubleParams::from_mu(mu));
  };
  const Window w{dims};
  double worst = 0.0;
  for (double t : {-0.5, 0.0, 0.5}) {
    const auto d = Deltas::constant(0.15, 0.1);
    const double r1 = validate::congruent_up_to_rigid_motion(closed_form::gen_dini(w, 1.0, 0.7, d, t),
                                                             single(d, 1.0, 0.7, t)).residual;
    const auto fd = Deltas::constant(0.45, 0.3);
    const double r2 = validate::congruent_up_to_rigid_motion(closed_form::gen_pseudosphere_family(w, 0.8, fd, t),
                                                             single(fd, -M_PI / 2, 0.8, t)).residual;
    const double r3 = validate::congruent_up_to_rigid_motion(closed_form::gen_breather(w, 0.9, 0.35, 0.3, t),
                                                             dbl(0.9, 0.35, 0.3, t)).residual;
    const double r4 = validate::congruent_up_to_rigid_motion(closed_form::gen_kuen(w, 0.4, 0.25, t),
                                                             dbl(0.0, 0.4, 0.25, t)).residual;
    worst = std::max({worst, r1, r2, r3, r4});
  }
  return {worst < 1e-8, fmt("max aligned residual = %.3g", worst)};
}

Outcome ac6() {
  oracle::Rng rng(1006);
  const auto d = Deltas::constant(0.3, 0.2);
  const auto field = closed_form::line_lax_field(Dims{15, 15}, d);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double alpha = rng.sign() * rng.uniform(0.3, 2.8), theta = rng.uniform(-M_PI, M_PI);
    const auto bt = backlund::evolve(field, {alpha, theta});
    for (int l = 0; l < 15; ++l) {
      for (int k = 0; k < 15; ++k) {
        worst = std::max(worst, std::abs(bt.s_tilde(k, l) - closed_form::line_bt_s(k, l, alpha, theta, d)));
      }
    }
  }
  return {worst < 1e-10, fmt("max |s~ - closed form| = %.3g", worst)};
}

Outcome ac7() {
  oracle::Rng rng(1007);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const cplx s = rng.unit(), s1 = rng.unit(), s2 = rng.unit(), l = rng.unit(), m = rng.unit();
    const double d1 = rng.sign() * rng.uniform(0.2, 1.4), d2 = rng.sign() * rng.uniform(0.2, 1.4);
    const auto e = cklax::evolve_quad(s, s1, s2, l, m, d1, d2);
    for (double lambda : {0.5, 1.0, 2.0}) {
      const double t = std::log(lambda);
      const auto a = oracle::mul(M(cklax::lax_M(s1, e.s12, e.m1, d2, t).mat), M(cklax::lax_L(s, s1, l, d1, t).mat));
      const auto b = oracle::mul(M(cklax::lax_L(s2, e.s12, e.l2, d1, t).mat), M(cklax::lax_M(s, s2, m, d2, t).mat));
      worst = std::max(worst, oracle::max_abs(oracle::sub(a, b)));
    }
  }
  return {worst < 1e-9, fmt("max |M1 L - L2 M| = %.3g", worst)};
}

Outcome ac8() {
  oracle::Rng rng(1008);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double h = rng.uniform(-M_PI, M_PI), h1 = rng.uniform(-M_PI, M_PI), h12 = rng.uniform(-M_PI, M_PI);
    const double d = rng.sign() * rng.uniform(0.1, 3.0), t = rng.uniform(-1.0, 1.0);
    const cplx H = std::exp(oracle::I * h), H1 = std::exp(oracle::I * h1), H12 = std::exp(oracle::I * h12);
    const auto L = M(cklax::lax_L(H, H12, H1, d, t).mat);
    const auto VU = oracle::mul(M(knet::lax_V(h1, h12, -d, t).mat), M(knet::lax_U(h, h1, d, t).mat));
    worst = std::max(worst, oracle::max_abs(oracle::sub(L, VU)));
  }
  return {worst < 1e-10, fmt("max entry difference = %.3g", worst)};
}

Outcome ac9() {
  oracle::Rng rng(1009);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    CknetLaxField f(Dims{2, 2});
    f.s(0, 0) = rng.unit();
    f.s(1, 0) = rng.unit();
    f.s(0, 1) = rng.unit();
    f.l(0, 0) = rng.unit();
    f.m(0, 0) = rng.unit();
    f.delta1[0] = rng.sign() * rng.uniform(0.4, 1.2);
    f.delta2[0] = rng.sign() * rng.uniform(0.4, 1.2);
    const auto net = cklax::integrate(cklax::complete_field(f), 0.0).net;
    const auto data = cklax::CircularQuadData::from_points(net.f(0, 0), net.f(1, 0), net.f(0, 1), net.n(0, 0));
    const auto back = cklax::fit_quad(data).reconstruct();
    for (int l = 0; l < 2; ++l) {
      for (int k = 0; k < 2; ++k) {
        worst = std::max({worst, norm(back.f(k, l) - net.f(k, l)), norm(back.n(k, l) - net.n(k, l))});
      }
    }
  }
  return {worst < 1e-8, fmt("max reconstruction error = %.3g", worst)};
}

Outcome ac10() {
  const auto net = closed_form::gen_kuen(centred(20, 20), 0.2, 0.25, 0.0);
  double worst = 0.0;
  for (int l = 0; l < net.L(); ++l) worst = std::max(worst, validate::polygon_planarity(net, validate::Direction::K, l));
  return {worst < 1e-8, fmt("max plane residual = %.3g", worst)};
}

Outcome ac11() {
  const double d2 = M_PI / 10, q = 0.6;
  const double mu = -std::asin(1.0 / std::tan(d2) * std::tan(d2 * q));
  const auto period = closed_form::breather_period(mu, d2);
  if (!period) return {false, "no period detected"};
  const int P = *period;
  const auto net = closed_form::gen_breather(Window{Dims{10, P + 10}, -5, 0}, mu, 0.4, d2, 0.0);
  double worst = 0.0;
  for (int l = 0; l < 10; ++l) {
    for (int k = 0; k < 10; ++k) worst = std::max(worst, norm(net.f(k, l + P) - net.f(k, l)));
  }
  return {worst < 1e-8, "P = " + std::to_string(P) + fmt(", max |f(k,l+P) - f(k,l)| = %.3g", worst)};
}

Outcome ac12() {
  oracle::Rng rng(1012);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    KnetField f(Dims{2, 2});
    f.h(0, 0) = rng.uniform(-M_PI, M_PI);
    f.h(1, 0) = rng.uniform(-M_PI, M_PI);
    f.h(0, 1) = rng.uniform(-M_PI, M_PI);
    const double du = rng.uniform(0.2, 1.3), dv = -rng.uniform(0.2, 1.3), t = rng.uniform(-1.0, 1.0);
    f.delta_u[0] = du;
    f.delta_v[0] = dv;
    const auto net = knet::integrate(knet::complete_field(f), t).net;
    const double formula = -2 * std::pow(std::cosh(t), 2) * (1 - std::cos(du) * std::tanh(t)) *
                         (1 + std::cos(dv) * std::tanh(t)) / (std::cos(du) + std::cos(dv));
    worst = std::max(worst, std::abs(validate::gauss_curvature(net, 0, 0) - formula));
  }
  return {worst < 1e-8, fmt("max |K_geometric - K_formula| = %.3g", worst)};
}

Outcome ac13() {
  oracle::Rng rng(1013);
  KnetField f(Dims{10, 10});
  for (int k = 0; k < 10; ++k) f.h(k, 0) = rng.uniform(-M_PI, M_PI);
  for (int l = 0; l < 10; ++l) f.h(0, l) = rng.uniform(-M_PI, M_PI);
  for (auto& d : f.delta_u) d = rng.uniform(0.3, 1.2);
  for (auto& d : f.delta_v) d = -rng.uniform(0.3, 1.2);
  f = knet::complete_field(f);
  const double t = 0.2, h = 1e-6;
  const auto base = knet::integrate(f, t).frame;
  const auto up = knet::integrate(f, t + h).frame;
  const auto down = knet::integrate(f, t - h).frame;
  double worst = 0.0;
  for (int l = 0; l < 10; ++l) {
    for (int k = 0; k < 10; ++k) {
      const Biquat fd = (up.phi(k, l) - down.phi(k, l)) / (2 * h);
      const double scale = std::max(1.0, base.phi_dot(k, l).max_abs());
      worst = std::max(worst, (fd - base.phi_dot(k, l)).max_abs() / scale);
    }
  }
  return {worst < 1e-7, fmt("max relative error = %.3g", worst)};
}

Outcome ac14() {
  const auto field = closed_form::line_lax_field(Dims{10, 10}, Deltas::constant(0.3, 0.2));
  const auto base = cklax::integrate(field, 0.0);
  const auto r = backlund::bianchi_check(field, base.frame, {M_PI / 3, M_PI / 2}, {-M_PI / 2, M_PI / 2});
  const double worst = std::max(r.position_residual, r.normal_residual);
  return {r.ok && worst < 1e-8, fmt("residual = %.3g, phase = %.6f", worst, r.theta_hat_tilde)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1  constant curvature K = -1", ac1},
      {"AC2  circular exactly at lambda = 1", ac2},
      {"AC3  edge constraint", ac3},
      {"AC4  transform metric relations", ac4},
      {"AC5  closed forms vs Lax pipelines", ac5},
      {"AC6  transform recursion closed form", ac6},
      {"AC7  quad compatibility", ac7},
      {"AC8  L = V1 U factorization", ac8},
      {"AC9  fit round-trip", ac9},
      {"AC10 Kuen planar polygons", ac10},
      {"AC11 breather closure", ac11},
      {"AC12 K-net curvature formula", ac12},
      {"AC13 frame t-derivative", ac13},
      {"AC14 Bianchi permutability", ac14},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-40s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
