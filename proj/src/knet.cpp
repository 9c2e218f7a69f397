#include "cknet/knet.hpp"

#include <sstream>

namespace cknet::knet {

namespace {

void check_half_angle(double delta, const char* name) {
  if (std::abs(std::sin(delta / 2)) < tol::kAngle || std::abs(std::cos(delta / 2)) < tol::kAngle) {
    std::ostringstream os;
    os << name << " = " << delta << " makes tan or cot of the half angle degenerate";
    throw Error(ErrorKind::DegenerateAngle, os.str());
  }
}

EdgeLax horizontal_of(const KnetField& f, double t) {
  return [&f, t](int k, int l) { return lax_U(f.h(k, l), f.h(k + 1, l), f.delta_u[k], t); };
}

EdgeLax vertical_of(const KnetField& f, double t) {
  return [&f, t](int k, int l) { return lax_V(f.h(k, l), f.h(k, l + 1), f.delta_v[l], t); };
}

}  // namespace

LaxEval lax_U(double h, double h1, double delta_u, double t) {
  check_half_angle(delta_u, "delta_u");
  const double c = 1.0 / std::tan(delta_u / 2);
  const cplx lam = std::exp(t);
  const cplx q = std::exp(kI * (h1 - h));
  return {Biquat::from_matrix({c * q, kI * lam, kI * lam, c / q}),
          Biquat::from_matrix({0.0, kI * lam, kI * lam, 0.0})};
}

LaxEval lax_V(double h, double h2, double delta_v, double t) {
  check_half_angle(delta_v, "delta_v");
  const double tn = std::tan(delta_v / 2);
  const cplx inv_lam = std::exp(-t);
  const cplx p = std::exp(kI * (h2 + h));
  const cplx b = kI * inv_lam * tn * p;
  const cplx c = kI * inv_lam * tn / p;
  return {Biquat::from_matrix({1.0, b, c, 1.0}), Biquat::from_matrix({0.0, -b, -c, 0.0})};
}

cplx hirota_residual(const KnetField& field, int k, int l) {
  const double h = field.h.at(k, l);
  const double h1 = field.h.at(k + 1, l);
  const double h2 = field.h.at(k, l + 1);
  const double h12 = field.h.at(k + 1, l + 1);
  const double T = std::tan(field.delta_u.at(k) / 2) * std::tan(field.delta_v.at(l) / 2);
  return std::exp(kI * (h12 + h)) - std::exp(kI * (h1 + h2)) - T * (1.0 - std::exp(kI * (h + h1 + h12 + h2)));
}

double solve_hirota(double h, double h1, double h2, double delta_u, double delta_v) {
  const double T = std::tan(delta_u / 2) * std::tan(delta_v / 2);
  const cplx a = std::exp(kI * (h1 + h2));
  const cplx den = std::exp(kI * h) * (1.0 + T * a);
  if (std::abs(den) < tol::kDenominator) {
    throw Error(ErrorKind::DegenerateEvolution, "Hirota step has a vanishing denominator");
  }
  return std::arg((a + T) / den);
}

KnetField complete_field(KnetField field) {
  const auto [K, L] = field.dims;
  if (static_cast<int>(field.delta_u.size()) != K - 1 || static_cast<int>(field.delta_v.size()) != L - 1) {
    throw Error(ErrorKind::DimensionMismatch, "delta_u needs K - 1 entries and delta_v L - 1");
  }
  for (int l = 0; l + 1 < L; ++l) {
    for (int k = 0; k + 1 < K; ++k) {
      field.h(k + 1, l + 1) = solve_hirota(field.h(k, l), field.h(k + 1, l), field.h(k, l + 1),
                                           field.delta_u[k], field.delta_v[l]);
    }
  }
  return field;
}

Integrated integrate(const KnetField& field, double t, double tol) {
  const Dims dims = field.dims;
  if (field.h.K() != dims.K || field.h.L() != dims.L || static_cast<int>(field.delta_u.size()) != dims.K - 1 ||
      static_cast<int>(field.delta_v.size()) != dims.L - 1) {
    throw Error(ErrorKind::DimensionMismatch, "K-net field arrays do not match dims");
  }
  for (int l = 0; l + 1 < dims.L; ++l) {
    for (int k = 0; k + 1 < dims.K; ++k) {
      const double r = std::abs(hirota_residual(field, k, l));
      if (r > tol) {
        std::ostringstream os;
        os << "Hirota residual " << r << " on quad (" << k << ", " << l << ")";
        throw Error(ErrorKind::IncompatibleField, os.str());
      }
    }
  }
  const EdgeLax u = horizontal_of(field, t);
  const EdgeLax v = vertical_of(field, t);
  const double zc = zero_curvature_residual(dims, u, v);
  if (zc > tol) {
    std::ostringstream os;
    os << "zero-curvature residual " << zc;
    throw Error(ErrorKind::IncompatibleField, os.str());
  }
  Integrated out{propagate_frame(dims, t, u, v), QuadNet(dims)};
  out.net = sym_net(out.frame);
  out.net.meta() = {{"generator", "knet"}, {"t", t}};
  return out;
}

double quad_curvature(double delta_u, double delta_v, double t) {
  const double den = std::cos(delta_u) + std::cos(delta_v);
  if (std::abs(den) < tol::kDenominator) {
    throw Error(ErrorKind::DegenerateQuad, "cos(delta_u) + cos(delta_v) vanishes");
  }
  const double ch = std::cosh(t);
  const double th = std::tanh(t);
  return -2.0 * ch * ch * (1.0 - std::cos(delta_u) * th) * (1.0 + std::cos(delta_v) * th) / den;
}

}  // namespace cknet::knet
