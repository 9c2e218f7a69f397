#include "cknet/lattice.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cknet {

using nlohmann::json;

QuadNet::QuadNet(Dims dims) : dims_(dims), f_(dims.K, dims.L), n_(dims.K, dims.L, Vec3{0, 0, 1}) {
  if (dims.K < 1 || dims.L < 1) {
    throw Error(ErrorKind::DimensionMismatch, "dims must be at least 1x1");
  }
}

void QuadNet::check_invariants(double tol) const {
  for (int l = 0; l < L(); ++l) {
    for (int k = 0; k < K(); ++k) {
      const double len = norm(n(k, l));
      if (!(std::abs(len - 1.0) <= tol)) {
        std::ostringstream os;
        os << "normal at (" << k << ", " << l << ") has length " << std::setprecision(17) << len;
        throw Error(ErrorKind::InvariantViolation, os.str());
      }
    }
  }
}

CknetLaxField::CknetLaxField(Dims d)
    : dims(d),
      s(d.K, d.L, 1.0),
      l(d.K - 1, d.L, 1.0),
      m(d.K, d.L - 1, 1.0),
      delta1(static_cast<std::size_t>(d.K - 1), 0.0),
      delta2(static_cast<std::size_t>(d.L - 1), 0.0) {
  if (d.K < 1 || d.L < 1) throw Error(ErrorKind::DimensionMismatch, "dims must be at least 1x1");
}

void CknetLaxField::check_invariants(double tol) const {
  const auto [K, L] = dims;
  if (s.K() != K || s.L() != L || l.K() != K - 1 || l.L() != L || m.K() != K || m.L() != L - 1 ||
      static_cast<int>(delta1.size()) != K - 1 || static_cast<int>(delta2.size()) != L - 1) {
    throw Error(ErrorKind::DimensionMismatch, "Lax field arrays do not match dims");
  }
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < K; ++k) {
      if (!(std::abs(std::abs(s(k, j)) - 1.0) <= tol)) {
        std::ostringstream os;
        os << "|s(" << k << ", " << j << ")| = " << std::abs(s(k, j));
        throw Error(ErrorKind::InvariantViolation, os.str());
      }
    }
  }
}

std::pair<Vec3, Vec3> sym_point(const Biquat& phi, const Biquat& phi_dot) {
  const Biquat inv = inverse(phi);
  return {2.0 * trace_free(inv * phi_dot), trace_free(inv * Biquat::basis(3) * phi)};
}

QuadNet sym_net(const FrameState& frame) {
  QuadNet net(frame.dims());
  for (int l = 0; l < net.L(); ++l) {
    for (int k = 0; k < net.K(); ++k) {
      auto [f, n] = sym_point(frame.phi(k, l), frame.phi_dot(k, l));
      net.f(k, l) = f;
      net.n(k, l) = n;
    }
  }
  return net;
}

// --- JSON helpers -------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ParseError, field + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(where.empty() ? key : where + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) parse_fail(field, "expected a number");
  return j.get<double>();
}

Vec3 vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) parse_fail(field, "expected an array of 3 numbers");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

cplx complex_value(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) parse_fail(field, "expected a number or [re, im]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json angle_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return complex_json(z);
}

Dims dims_from(const json& j) {
  const json& d = require(j, "dims", "");
  if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer()) {
    parse_fail("dims", "expected [K, L] integers");
  }
  Dims dims{d[0].get<int>(), d[1].get<int>()};
  if (dims.K < 1 || dims.L < 1) throw Error(ErrorKind::DimensionMismatch, "dims must be at least 1x1");
  return dims;
}

template <class F>
void read_grid(const json& j, const char* key, int K, int L, F&& assign) {
  const json& arr = require(j, key, "");
  if (!arr.is_array()) parse_fail(key, "expected an array");
  if (static_cast<long>(arr.size()) != static_cast<long>(K) * L) {
    std::ostringstream os;
    os << key << " has " << arr.size() << " entries, expected " << static_cast<long>(K) * L;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      const std::size_t i = static_cast<std::size_t>(l) * K + k;
      assign(k, l, complex_value(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
    }
  }
}

std::vector<cplx> read_angles(const json& j, const char* key, int expected) {
  const json& arr = require(j, key, "");
  if (!arr.is_array()) parse_fail(key, "expected an array");
  if (static_cast<int>(arr.size()) != expected) {
    throw Error(ErrorKind::DimensionMismatch, std::string(key) + " has " + std::to_string(arr.size()) +
                                                  " entries, expected " + std::to_string(expected));
  }
  std::vector<cplx> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(complex_value(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n');
    throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json net_to_json(const QuadNet& net) {
  json vertices = json::array();
  for (int l = 0; l < net.L(); ++l) {
    for (int k = 0; k < net.K(); ++k) {
      const Vec3& f = net.f(k, l);
      const Vec3& n = net.n(k, l);
      vertices.push_back({{"f", {f.x, f.y, f.z}}, {"n", {n.x, n.y, n.z}}});
    }
  }
  json j = {{"dims", {net.K(), net.L()}}, {"vertices", std::move(vertices)}};
  if (!net.meta().empty()) j["meta"] = net.meta();
  return j;
}

QuadNet net_from_json(const json& j) {
  if (!j.is_object()) parse_fail("<root>", "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "dims" && key != "vertices" && key != "meta") parse_fail(key, "unknown field");
  }
  const Dims dims = dims_from(j);
  const json& vertices = require(j, "vertices", "");
  if (!vertices.is_array()) parse_fail("vertices", "expected an array");
  if (vertices.size() != dims.count()) {
    std::ostringstream os;
    os << "vertices has " << vertices.size() << " entries, dims require " << dims.count();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  QuadNet net(dims);
  for (int l = 0; l < dims.L; ++l) {
    for (int k = 0; k < dims.K; ++k) {
      const std::size_t i = static_cast<std::size_t>(l) * dims.K + k;
      const std::string where = "vertices[" + std::to_string(i) + "]";
      net.f(k, l) = vec3(require(vertices[i], "f", where), where + ".f");
      net.n(k, l) = vec3(require(vertices[i], "n", where), where + ".n");
    }
  }
  if (auto it = j.find("meta"); it != j.end()) {
    if (!it->is_object()) parse_fail("meta", "expected an object");
    net.meta() = *it;
  }
  net.check_invariants();
  return net;
}

void net_io_write(const QuadNet& net, const std::filesystem::path& path) {
  write_file(path, dump_json(net_to_json(net)));
}

QuadNet net_io_read(const std::filesystem::path& path) { return net_from_json(parse_file(path)); }

json lax_to_json(const CknetLaxField& field) {
  auto grid = [](const Grid<cplx>& g) {
    json arr = json::array();
    for (const cplx& z : g.values()) arr.push_back(complex_json(z));
    return arr;
  };
  json d1 = json::array();
  json d2 = json::array();
  for (const cplx& d : field.delta1) d1.push_back(angle_json(d));
  for (const cplx& d : field.delta2) d2.push_back(angle_json(d));
  return {{"dims", {field.dims.K, field.dims.L}},
          {"s", grid(field.s)},
          {"l", grid(field.l)},
          {"m", grid(field.m)},
          {"delta1", std::move(d1)},
          {"delta2", std::move(d2)}};
}

CknetLaxField lax_from_json(const json& j) {
  if (!j.is_object()) parse_fail("<root>", "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "dims" && key != "s" && key != "l" && key != "m" && key != "delta1" && key != "delta2" &&
        key != "meta") {
      parse_fail(key, "unknown field");
    }
  }
  const Dims dims = dims_from(j);
  CknetLaxField field(dims);
  read_grid(j, "s", dims.K, dims.L, [&](int k, int l, cplx z) { field.s(k, l) = z; });
  read_grid(j, "l", dims.K - 1, dims.L, [&](int k, int l, cplx z) { field.l(k, l) = z; });
  read_grid(j, "m", dims.K, dims.L - 1, [&](int k, int l, cplx z) { field.m(k, l) = z; });
  field.delta1 = read_angles(j, "delta1", dims.K - 1);
  field.delta2 = read_angles(j, "delta2", dims.L - 1);
  field.check_invariants();
  return field;
}

void lax_io_write(const CknetLaxField& field, const std::filesystem::path& path) {
  write_file(path, dump_json(lax_to_json(field)));
}

CknetLaxField lax_io_read(const std::filesystem::path& path) { return lax_from_json(parse_file(path)); }

void export_obj(const QuadNet& net, std::ostream& out) {
  if (net.K() < 2 || net.L() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "OBJ export needs at least a 2x2 window");
  }
  out << std::setprecision(17);
  for (const Vec3& f : net.positions().values()) out << "v " << f.x << ' ' << f.y << ' ' << f.z << '\n';
  for (const Vec3& n : net.normals().values()) out << "vn " << n.x << ' ' << n.y << ' ' << n.z << '\n';
  const auto id = [&](int k, int l) { return static_cast<long>(l) * net.K() + k + 1; };
  for (int l = 0; l + 1 < net.L(); ++l) {
    for (int k = 0; k + 1 < net.K(); ++k) {
      out << "f";
      for (long v : {id(k, l), id(k + 1, l), id(k + 1, l + 1), id(k, l + 1)}) out << ' ' << v << "//" << v;
      out << '\n';
    }
  }
}

void export_obj(const QuadNet& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  export_obj(net, out);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace cknet
