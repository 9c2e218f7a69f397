#include "cknet/validate.hpp"

#include <Eigen/Dense>
#include <limits>
#include <sstream>

namespace cknet::validate {

namespace {

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

void require_quad(const QuadNet& net, int k, int l) {
  if (k < 0 || l < 0 || k + 1 >= net.K() || l + 1 >= net.L()) {
    throw Error(ErrorKind::DimensionMismatch,
                "quad (" + std::to_string(k) + ", " + std::to_string(l) + ") is outside the window");
  }
}

std::string quad_name(int k, int l) { return "(" + std::to_string(k) + ", " + std::to_string(l) + ")"; }

Biquat quat(const Vec3& v) { return Biquat::embed(v); }

std::array<Vec3, 3> frame_at_origin(const QuadNet& net) {
  const Vec3 p = net.f(0, 0);
  const double scale = std::max(1.0, max_abs(p));
  Vec3 t1 = net.K() > 1 ? net.f(1, 0) - p : Vec3{};
  Vec3 t2 = net.L() > 1 ? net.f(0, 1) - p : Vec3{};
  if (norm(t1) < tol::kGeometric * scale) std::swap(t1, t2);
  if (norm(t1) < tol::kGeometric * scale) throw Error(ErrorKind::DegenerateFrame, "no tangent at (0,0)");
  const Vec3 e1 = normalized(t1);
  Vec3 e3 = cross(t1, t2);
  if (norm(e3) < tol::kGeometric * norm(t1) * std::max(norm(t2), 1.0)) e3 = cross(t1, net.n(0, 0));
  if (norm(e3) < tol::kGeometric * norm(t1)) throw Error(ErrorKind::DegenerateFrame, "tangent frame at (0,0) is degenerate");
  e3 = normalized(e3);
  return {e1, cross(e3, e1), e3};
}

}  // namespace

std::vector<EdgeResidual> edge_constraint_residual(const QuadNet& net) {
  std::vector<EdgeResidual> out;
  const auto edge = [&](int k, int l, int k1, int l1, int dir) {
    const Vec3 e = net.f(k1, l1) - net.f(k, l);
    const Vec3 s = net.n(k1, l1) + net.n(k, l);
    const double le = norm(e);
    if (!(le > 0.0)) {
      throw Error(ErrorKind::ZeroEdge, "edge from " + quad_name(k, l) + " has zero length");
    }
    const double ls = norm(s);
    out.push_back({k, l, dir, ls < tol::kSingular ? 0.0 : std::abs(dot(e, s)) / (le * ls)});
  };
  for (int l = 0; l < net.L(); ++l) {
    for (int k = 0; k + 1 < net.K(); ++k) edge(k, l, k + 1, l, 0);
  }
  for (int l = 0; l + 1 < net.L(); ++l) {
    for (int k = 0; k < net.K(); ++k) edge(k, l, k, l + 1, 1);
  }
  return out;
}

double max_edge_constraint(const QuadNet& net) {
  double worst = 0.0;
  for (const auto& r : edge_constraint_residual(net)) worst = std::max(worst, r.value);
  return worst;
}

Vec3 face_normal(const QuadNet& net, int k, int l) {
  require_quad(net, k, l);
  // Degeneracy is judged by the sine of the angle between the diagonals, so
  // small but well-resolved quads keep the normal-based choice.
  const Vec3 nd1 = net.n(k + 1, l + 1) - net.n(k, l), nd2 = net.n(k, l + 1) - net.n(k + 1, l);
  const Vec3 N = cross(nd1, nd2);
  if (norm(N) > 1e-12 * norm(nd1) * norm(nd2)) return normalized(N);
  const Vec3 fd1 = net.f(k + 1, l + 1) - net.f(k, l), fd2 = net.f(k, l + 1) - net.f(k + 1, l);
  const Vec3 M = cross(fd1, fd2);
  if (!(norm(M) > 0.0)) {
    throw Error(ErrorKind::DegenerateQuad, "no face normal on quad " + quad_name(k, l));
  }
  return normalized(M);
}

namespace {

struct QuadDets {
  double ff, nn, fn, nf;
};

QuadDets quad_dets(const QuadNet& net, int k, int l, const Vec3& N) {
  const Vec3 fd1 = net.f(k + 1, l + 1) - net.f(k, l);
  const Vec3 fd2 = net.f(k, l + 1) - net.f(k + 1, l);
  const Vec3 nd1 = net.n(k + 1, l + 1) - net.n(k, l);
  const Vec3 nd2 = net.n(k, l + 1) - net.n(k + 1, l);
  return {det3(fd1, fd2, N), det3(nd1, nd2, N), det3(fd1, nd2, N), det3(nd1, fd2, N)};
}

void check_area(const QuadDets& d, int k, int l) {
  if (!(std::abs(d.ff) > 0.0)) {
    throw Error(ErrorKind::DegenerateQuad, "quad " + quad_name(k, l) + " has zero mixed area");
  }
}

}  // namespace

double gauss_curvature(const QuadNet& net, int k, int l) {
  const Vec3 N = face_normal(net, k, l);
  const QuadDets d = quad_dets(net, k, l, N);
  check_area(d, k, l);
  return d.nn / d.ff;
}

double mean_curvature(const QuadNet& net, int k, int l) {
  const Vec3 N = face_normal(net, k, l);
  const QuadDets d = quad_dets(net, k, l, N);
  check_area(d, k, l);
  return 0.5 * (d.fn + d.nf) / d.ff;
}

double circularity(const QuadNet& net, int k, int l) {
  require_quad(net, k, l);
  const Vec3 a = net.f(k, l), b = net.f(k + 1, l), c = net.f(k + 1, l + 1), d = net.f(k, l + 1);
  for (const Vec3& e : {a - b, b - c, c - d, d - a, a - c, b - d}) {
    if (!(norm(e) > 0.0)) {
      throw Error(ErrorKind::CoincidentVertices, "quad " + quad_name(k, l) + " has coincident vertices");
    }
  }
  const Biquat cr = quat(a - b) * inverse(quat(b - c)) * quat(c - d) * inverse(quat(d - a));
  const Vec3 im{cr[1].real(), cr[2].real(), cr[3].real()};
  const double whole = std::hypot(cr[0].real(), norm(im));
  return norm(im) / whole;
}

double polygon_planarity(const QuadNet& net, Direction dir, int index) {
  const int n = dir == Direction::K ? net.K() : net.L();
  if ((dir == Direction::K ? net.L() : net.K()) <= index || index < 0) {
    throw Error(ErrorKind::DimensionMismatch, "polygon index outside the window");
  }
  if (n < 4) return 0.0;
  Eigen::MatrixXd pts(n, 3);
  for (int i = 0; i < n; ++i) {
    const Vec3& p = dir == Direction::K ? net.f(i, index) : net.f(index, i);
    pts.row(i) << p.x, p.y, p.z;
  }
  const Eigen::RowVector3d mean = pts.colwise().mean();
  const Eigen::MatrixXd centered = pts.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::Vector3d normal = svd.matrixV().col(2);
  return (centered * normal).cwiseAbs().maxCoeff();
}

QuadReport quad_report(const QuadNet& net, int k, int l) {
  QuadReport r;
  r.face_normal = face_normal(net, k, l);
  r.K = gauss_curvature(net, k, l);
  r.H = mean_curvature(net, k, l);
  r.cross_ratio_im = circularity(net, k, l);
  const Vec3 f = net.f(k, l);
  const Vec3 pn = cross(net.f(k + 1, l) - f, net.f(k, l + 1) - f);
  r.planarity = norm(pn) > 0 ? std::abs(dot(net.f(k + 1, l + 1) - f, normalized(pn))) : 0.0;
  for (const auto& [a, b] : {std::pair{std::pair{k, l}, std::pair{k + 1, l}}, {{k, l}, {k, l + 1}},
                             {{k + 1, l}, {k + 1, l + 1}}, {{k, l + 1}, {k + 1, l + 1}}}) {
    const Vec3 e = net.f(b.first, b.second) - net.f(a.first, a.second);
    const Vec3 s = net.n(b.first, b.second) + net.n(a.first, a.second);
    if (norm(e) > 0 && norm(s) > 0) r.edge_constraint_max = std::max(r.edge_constraint_max, std::abs(dot(e, s)) / (norm(e) * norm(s)));
  }
  return r;
}

Congruence congruent_up_to_rigid_motion(const QuadNet& a, const QuadNet& b) {
  if (!(a.dims() == b.dims())) throw Error(ErrorKind::DimensionMismatch, "nets have different windows");
  Congruence out;
  if (a.K() > 1 || a.L() > 1) {
    const auto fa = frame_at_origin(a);
    const auto fb = frame_at_origin(b);
    // R = sum_j fb_j fa_j^T maps the frame of a onto the frame of b.
    for (int i = 0; i < 3; ++i) {
      out.motion.rows[i] = fa[0] * fb[0][i] + fa[1] * fb[1][i] + fa[2] * fb[2][i];
    }
  }
  out.motion.shift = b.f(0, 0) - out.motion.rotate(a.f(0, 0));
  for (int l = 0; l < a.L(); ++l) {
    for (int k = 0; k < a.K(); ++k) {
      out.residual = std::max(out.residual, norm(out.motion(a.f(k, l)) - b.f(k, l)));
      out.normal_residual = std::max(out.normal_residual, norm(out.motion.rotate(a.n(k, l)) - b.n(k, l)));
    }
  }
  return out;
}

QuadNet transformed(const QuadNet& net, const Isometry& m, double scale) {
  QuadNet out(net.dims());
  for (int l = 0; l < net.L(); ++l) {
    for (int k = 0; k < net.K(); ++k) {
      out.f(k, l) = m.rotate(net.f(k, l)) * scale + m.shift;
      out.n(k, l) = m.rotate(net.n(k, l));
    }
  }
  out.meta() = net.meta();
  return out;
}

QuadNet reflected(const QuadNet& net) {
  QuadNet out(net.dims());
  for (int l = 0; l < net.L(); ++l) {
    for (int k = 0; k < net.K(); ++k) {
      const Vec3 f = net.f(k, l), n = net.n(k, l);
      out.f(k, l) = {f.x, -f.y, f.z};
      out.n(k, l) = {n.x, -n.y, n.z};
    }
  }
  return out;
}

nlohmann::json validation_report(const QuadNet& net, const std::set<std::string>& checks, const Tolerances& tol) {
  using nlohmann::json;
  for (const auto& c : checks) {
    if (!known_checks().count(c)) throw Error(ErrorKind::ParseError, "checks: unknown check '" + c + "'");
  }
  constexpr std::size_t kMaxListed = 50;
  json report = {{"dims", {net.K(), net.L()}}, {"checks", json::object()}};
  bool all_pass = true;

  const auto record = [&](const std::string& name, double worst, const json& failing, std::size_t n_failing,
                          double tolerance) {
    const bool pass = n_failing == 0;
    all_pass = all_pass && pass;
    report["checks"][name] = {{"max_residual", worst},
                              {"tolerance", tolerance},
                              {"failing_count", n_failing},
                              {"failing", failing},
                              {"pass", pass}};
  };

  if (checks.count("edge-constraint")) {
    double worst = 0.0;
    json failing = json::array();
    std::size_t count = 0;
    try {
      for (const auto& r : edge_constraint_residual(net)) {
        worst = std::max(worst, r.value);
        if (!(r.value < tol.edge)) {
          if (count++ < kMaxListed) failing.push_back({r.k, r.l, r.dir == 0 ? "k" : "l"});
        }
      }
    } catch (const Error& e) {
      worst = std::numeric_limits<double>::infinity();
      failing.push_back(e.what());
      ++count;
    }
    record("edge-constraint", worst, failing, count, tol.edge);
  }

  const auto per_quad = [&](const std::string& name, double tolerance, auto&& residual) {
    double worst = 0.0;
    json failing = json::array();
    std::size_t count = 0;
    for (int l = 0; l + 1 < net.L(); ++l) {
      for (int k = 0; k + 1 < net.K(); ++k) {
        double r;
        try {
          r = residual(k, l);
        } catch (const Error&) {
          r = std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, r);
        if (!(r < tolerance) && count++ < kMaxListed) failing.push_back({k, l});
      }
    }
    record(name, worst, failing, count, tolerance);
  };

  if (checks.count("curvature")) {
    per_quad("curvature", tol.curvature, [&](int k, int l) { return std::abs(gauss_curvature(net, k, l) - tol.target_K); });
    report["checks"]["curvature"]["target_K"] = tol.target_K;
  }
  if (checks.count("circularity")) {
    per_quad("circularity", tol.circularity, [&](int k, int l) { return circularity(net, k, l); });
  }
  report["pass"] = all_pass;
  return report;
}

}  // namespace cknet::validate
