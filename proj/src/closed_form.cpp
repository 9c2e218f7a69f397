#include "cknet/closed_form.hpp"

#include <numeric>
#include <sstream>

namespace cknet::closed_form {

namespace {

// sum_{s=0}^{k-1} term(s) for k >= 0, and -sum_{s=k}^{-1} term(s) for k < 0.
template <class T, class F>
T lattice_sum(int k, F&& term) {
  T acc{};
  if (k >= 0) {
    for (int s = 0; s < k; ++s) acc += term(s);
  } else {
    for (int s = k; s < 0; ++s) acc -= term(s);
  }
  return acc;
}

template <class F>
cplx lattice_product(int k, F&& term) {
  cplx acc = 1.0;
  if (k >= 0) {
    for (int s = 0; s < k; ++s) acc *= term(s);
  } else {
    for (int s = k; s < 0; ++s) acc /= term(s);
  }
  return acc;
}

double sign_of_row(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

Vec3 line_position(int k, int l, double t, const Deltas& d) { return {-2.0 * x_field(k, l, t, d), 0.0, 0.0}; }

template <class F>
QuadNet fill(const Window& w, F&& vertex) {
  QuadNet net(w.dims);
  for (int j = 0; j < w.dims.L; ++j) {
    for (int i = 0; i < w.dims.K; ++i) {
      auto [f, n] = vertex(w.k0 + i, w.l0 + j);
      net.f(i, j) = f;
      net.n(i, j) = n;
    }
  }
  return net;
}

nlohmann::json window_meta(const Window& w) { return {{"dims", {w.dims.K, w.dims.L}}, {"origin", {w.k0, w.l0}}}; }

}  // namespace

Deltas Deltas::constant(double delta1, double delta2) {
  return {[delta1](int) { return delta1; }, [delta2](int) { return delta2; }};
}

void Deltas::check(const Window& w) const {
  for (int k = std::min(w.k0, 0); k <= std::max(w.k0 + w.dims.K, 0); ++k) {
    if (std::abs(std::sin(d1(k))) < tol::kAngle) {
      std::ostringstream os;
      os << "sin(delta1(" << k << ")) vanishes";
      throw Error(ErrorKind::DegenerateAngle, os.str());
    }
  }
}

double x_field(int k, int l, double t, const Deltas& d) {
  const double ch = std::cosh(t), sh = std::sinh(t);
  const double a = lattice_sum<double>(k, [&](int s) {
    const double sd = std::sin(d.d1(s));
    return ch * sd / (1.0 + sh * sh * sd * sd);
  });
  const double b = lattice_sum<double>(l, [&](int s) {
    const double sd = std::sin(d.d2(s));
    return sh * sd * std::cos(d.d2(s)) / (1.0 + sh * sh * sd * sd);
  });
  return a + b;
}

cplx omega(int k, int l, double t, const Deltas& d) {
  const double ch = std::cosh(t), sh = std::sinh(t);
  return lattice_product(k, [&](int s) {
           const double v = sh * std::sin(d.d1(s));
           return (kI + v) / (kI - v);
         }) *
         lattice_product(l, [&](int s) {
           const double v = ch * std::tan(d.d2(s));
           return (kI + v) / (kI - v);
         });
}

cplx chi(int k, int l, double alpha, double theta, const Deltas& d) {
  const double sa = std::sin(alpha);
  const cplx a = lattice_sum<cplx>(k, [&](int s) {
    const double sd = std::sin(d.d1(s));
    return std::log(cplx((sa + sd) / (sa - sd)));
  });
  const cplx b = lattice_sum<cplx>(l, [&](int s) {
    return std::log(cplx(std::sin(alpha - d.d2(s)) / std::sin(alpha + d.d2(s))));
  });
  return std::log(cplx(std::tan(theta / 2))) + a - b;
}

cplx line_bt_s(int k, int l, double alpha, double theta, const Deltas& d) {
  return sign_of_row(l) * (-1.0 + 2.0 / (1.0 - kI * std::exp(chi(k, l, alpha, theta, d))));
}

CknetLaxField line_lax_field(Dims dims, const Deltas& d) {
  CknetLaxField f(dims);
  for (int l = 0; l < dims.L; ++l) {
    for (int k = 0; k < dims.K; ++k) f.s(k, l) = sign_of_row(l);
    for (int k = 0; k + 1 < dims.K; ++k) f.l(k, l) = sign_of_row(l);
  }
  for (int l = 0; l + 1 < dims.L; ++l) {
    for (int k = 0; k < dims.K; ++k) f.m(k, l) = sign_of_row(l);
  }
  for (int k = 0; k + 1 < dims.K; ++k) f.delta1[k] = d.d1(k);
  for (int l = 0; l + 1 < dims.L; ++l) f.delta2[l] = d.d2(l);
  return f;
}

QuadNet gen_line(const Window& w, const Deltas& d, double t) {
  d.check(w);
  QuadNet net = fill(w, [&](int k, int l) {
    const cplx om = omega(k, l, t, d);
    return std::pair{line_position(k, l, t, d), Vec3{0.0, om.imag(), om.real()}};
  });
  net.meta() = {{"generator", "line"}, {"t", t}, {"window", window_meta(w)}};
  return net;
}

QuadNet gen_dini(const Window& w, double alpha, double theta, const Deltas& d, double t) {
  if (std::abs(std::sin(alpha)) < tol::kAngle) throw Error(ErrorKind::DegenerateAngle, "alpha must not be 0 or pi");
  d.check(w);
  const double fac = std::sin(alpha) / (std::cosh(t) - std::cos(alpha) * std::sinh(t));
  const double shift = std::cosh(t) / std::tan(alpha) - std::sinh(t) / std::sin(alpha);
  QuadNet net = fill(w, [&](int k, int l) {
    const cplx c = chi(k, l, alpha, theta, d);
    const double th = std::tanh(c).real();
    const double sech = (1.0 / std::cosh(c)).real();
    const cplx om = omega(k, l, t, d);
    const cplx oh = om * (kI * th + shift);
    const Vec3 f = line_position(k, l, t, d) + fac * Vec3{th, -sech * om.real(), sech * om.imag()};
    return std::pair{f, fac * Vec3{sech, oh.imag(), oh.real()}};
  });
  net.meta() = {{"generator", "dini"}, {"alpha", alpha}, {"theta", theta}, {"t", t}, {"window", window_meta(w)}};
  return net;
}

QuadNet gen_pseudosphere_family(const Window& w, double theta, const Deltas& d, double t) {
  d.check(w);
  const double st = 1.0 / std::cosh(t);
  const double sh = std::sinh(t);
  QuadNet net = fill(w, [&](int k, int l) {
    const cplx c = chi(k, l, -M_PI / 2, theta, d);
    const double th = std::tanh(c).real();
    const double sech = (1.0 / std::cosh(c)).real();
    const cplx om = omega(k, l, t, d);
    const Vec3 f = line_position(k, l, t, d) - st * Vec3{th, -sech * om.real(), sech * om.imag()};
    const Vec3 n = -st * Vec3{sech, th * om.real() + sh * om.imag(), -th * om.imag() + sh * om.real()};
    return std::pair{f, n};
  });
  net.meta() = {{"generator", "pseudosphere-family"}, {"theta", theta}, {"t", t}, {"window", window_meta(w)}};
  return net;
}

double breather_kappa(double mu, double delta2) { return 2.0 * std::atan(std::sin(mu) * std::tan(delta2)); }

double breather_mu(double q, double delta2) { return -std::asin(std::tan(q * delta2) / std::tan(delta2)); }

std::optional<int> breather_period(double mu, double delta2, int max_den) {
  const double x = breather_kappa(mu, delta2) / M_PI;
  for (int q = 1; q <= max_den; ++q) {
    const double p = std::round(q * x);
    if (std::abs(q * x - p) < 1e-12 * q) {
      const long pi = std::lround(p);
      if (pi == 0) return 1;
      const long g = std::gcd(std::abs(pi), static_cast<long>(q));
      const long num = pi / g;
      const long den = q / g;
      return static_cast<int>(num % 2 == 0 ? den : 2 * den);
    }
  }
  return std::nullopt;
}

QuadNet gen_breather(const Window& w, double mu, double delta1, double delta2, double t) {
  if (std::abs(std::sin(mu)) < tol::kAngle) throw Error(ErrorKind::DegenerateAngle, "mu must not be 0 or pi");
  const Deltas d = Deltas::constant(delta1, delta2);
  d.check(w);
  const double kap = breather_kappa(mu, delta2);
  const double tau = std::log((1 - std::sin(delta1) * std::cos(mu)) / (1 + std::sin(delta1) * std::cos(mu)));
  const double ch = std::cosh(t), sh = std::sinh(t);
  const double cm = std::cos(mu), sm = std::sin(mu);
  QuadNet net = fill(w, [&](int k, int l) {
    const cplx om = omega(k, l, t, d);
    const double ckt = std::cosh(k * tau), skt = std::sinh(k * tau);
    const double slk = std::sin(l * kap), clk = std::cos(l * kap);
    const double A = std::sin(2 * mu) * ckt / ((std::cos(2 * mu) + std::cosh(2 * t)) * (cm * cm * slk * slk + ckt * ckt * sm * sm));
    const double B = 2 * (cm * ch * std::sin(2 * l * kap) - sm * sh * std::sinh(2 * k * tau));
    const double C = slk * slk * (std::sin(2 * mu) + (std::cosh(2 * t) + 1) / std::tan(mu)) -
                     ckt * ckt * (std::sin(2 * mu) + std::tan(mu) * (1 - std::cosh(2 * t)));
    const double P = cm * sh * std::tanh(k * tau) * slk + sm * ch * clk;
    const Vec3 f = line_position(k, l, t, d) +
                   2 * A * Vec3{cm * sh / ckt * slk * clk - sm * ch * skt, om.imag() * slk - om.real() * P,
                                om.imag() * P + om.real() * slk};
    const Vec3 n = A / (2 * ckt) *
                   Vec3{4 * (sm * sh * ckt * clk + cm * ch * skt * slk), om.real() * B - om.imag() * C,
                        -om.real() * C - om.imag() * B};
    return std::pair{f, n};
  });
  net.meta() = {{"generator", "breather"}, {"mu", mu}, {"delta1", delta1}, {"delta2", delta2}, {"t", t},
                {"window", window_meta(w)}};
  return net;
}

QuadNet gen_kuen(const Window& w, double delta1, double delta2, double t) {
  const Deltas d = Deltas::constant(delta1, delta2);
  d.check(w);
  const double tau = std::log((1 - std::sin(delta1)) / (1 + std::sin(delta1)));
  const double T = std::tan(delta2);
  const double ch = std::cosh(t), sh = std::sinh(t), th = std::tanh(t);
  QuadNet net = fill(w, [&](int k, int l) {
    const cplx om = omega(k, l, t, d);
    const double ckt = std::cosh(k * tau), skt = std::sinh(k * tau), tkt = std::tanh(k * tau);
    const double a = 2 * l * T;
    const double den = ckt * ckt + a * a;
    const double g = a * th * tkt + 1;
    const Vec3 f = line_position(k, l, t, d) +
                   2 * ckt / ch / den *
                       Vec3{a * th / ckt - skt, a * om.imag() / ch - om.real() * g, om.imag() * g + a * om.real() / ch};
    const double D = (1 - sh * sh) * ckt * ckt - a * a * ch * ch;
    const double E = 2 * a * ch - sh * std::sinh(2 * k * tau);
    const Vec3 n = 1 / (ch * ch * den) *
                   Vec3{2 * (a * ch * skt + sh * ckt), om.imag() * D + om.real() * E, om.real() * D - om.imag() * E};
    return std::pair{f, n};
  });
  net.meta() = {{"generator", "kuen"}, {"delta1", delta1}, {"delta2", delta2}, {"t", t}, {"window", window_meta(w)}};
  return net;
}

QuadNet gen_tractrix_pseudosphere(const Window& w, double epsilon, int phi_steps) {
  if (!(epsilon > 0.0 && epsilon < 2.0)) {
    throw Error(ErrorKind::InvalidStep, "epsilon must lie in (0, 2), got " + std::to_string(epsilon));
  }
  if (phi_steps < 1) throw Error(ErrorKind::InvalidStep, "phi_steps must be positive");
  const double tau = std::log((2 + epsilon) / (2 - epsilon));
  const double phi = 2 * M_PI / phi_steps;
  QuadNet net = fill(w, [&](int k, int l) {
    const double sech = 1.0 / std::cosh(tau * k), th = std::tanh(tau * k);
    const double c = std::cos(l * phi), s = std::sin(l * phi);
    return std::pair{Vec3{epsilon * k - th, c * sech, s * sech}, Vec3{sech, c * th, s * th}};
  });
  net.meta() = {{"generator", "tractrix-pseudosphere"}, {"epsilon", epsilon}, {"phi_steps", phi_steps},
                {"closed_l", w.dims.L == phi_steps + 1}, {"window", window_meta(w)}};
  return net;
}

TractrixData gen_darboux_tractrix(const std::vector<Point2>& p, Point2 start) {
  if (p.empty()) throw Error(ErrorKind::DimensionMismatch, "polygon is empty");
  TractrixData out;
  out.p = p;
  const auto dist = [](Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); };
  out.d = dist(start, p[0]) / 2;
  if (!(out.d > 0.0)) throw Error(ErrorKind::ZeroEdge, "start point coincides with p0");
  out.p_hat.push_back(start);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (dist(p[k], p[k + 1]) < tol::kZeroEdge) {
      throw Error(ErrorKind::ZeroEdge, "polygon edge " + std::to_string(k) + " vanishes");
    }
    const Point2 a = p[k + 1];
    const Point2 b = out.p_hat[k];
    const double len = dist(a, b);
    if (len < tol::kZeroEdge) {
      throw Error(ErrorKind::NoSolution, "fold is undefined at step " + std::to_string(k));
    }
    const Point2 u{(b.x - a.x) / len, (b.y - a.y) / len};
    const Point2 m{(a.x + b.x) / 2, (a.y + b.y) / 2};
    const double s = (p[k].x - m.x) * u.x + (p[k].y - m.y) * u.y;
    out.p_hat.push_back({p[k].x - 2 * s * u.x, p[k].y - 2 * s * u.y});
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point2 a = p[k], b = out.p_hat[k];
    out.p_tilde.push_back({(a.x + b.x) / 2, (a.y + b.y) / 2});
    const double len = dist(a, b);
    out.normals.push_back({(b.y - a.y) / len, -(b.x - a.x) / len});
  }
  return out;
}

QuadNet revolve(const TractrixData& data, int L, int phi_steps) {
  if (phi_steps < 1) throw Error(ErrorKind::InvalidStep, "phi_steps must be positive");
  const int K = static_cast<int>(data.p_tilde.size());
  QuadNet net(Dims{K, L});
  const double phi = 2 * M_PI / phi_steps;
  for (int l = 0; l < L; ++l) {
    const double c = std::cos(l * phi), s = std::sin(l * phi);
    for (int k = 0; k < K; ++k) {
      const Point2 q = data.p_tilde[k], n = data.normals[k];
      net.f(k, l) = {q.x, c * q.y, s * q.y};
      net.n(k, l) = {n.x, c * n.y, s * n.y};
    }
  }
  net.meta() = {{"generator", "darboux-tractrix"}, {"d", data.d}, {"phi_steps", phi_steps}};
  return net;
}

}  // namespace cknet::closed_form
