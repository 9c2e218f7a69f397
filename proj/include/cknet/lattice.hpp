#pragma once

// Rectangular Z^2 windows. Every per-vertex array is row-major with
// (k, l) -> l * K + k, where k runs along the first lattice direction.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cknet/error.hpp"
#include "cknet/quat.hpp"

namespace cknet {

struct Dims {
  int K = 1;
  int L = 1;

  constexpr bool operator==(const Dims&) const = default;
  constexpr std::size_t count() const { return static_cast<std::size_t>(K) * static_cast<std::size_t>(L); }
};

template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int K, int L, T fill = T{}) : K_(K), L_(L), data_(static_cast<std::size_t>(std::max(K, 0)) * std::max(L, 0), fill) {}

  int K() const { return K_; }
  int L() const { return L_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int k, int l) const { return static_cast<std::size_t>(l) * K_ + k; }
  bool contains(int k, int l) const { return k >= 0 && l >= 0 && k < K_ && l < L_; }

  T& operator()(int k, int l) { return data_[index(k, l)]; }
  const T& operator()(int k, int l) const { return data_[index(k, l)]; }
  T& at(int k, int l) {
    check(k, l);
    return data_[index(k, l)];
  }
  const T& at(int k, int l) const {
    check(k, l);
    return data_[index(k, l)];
  }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

 private:
  void check(int k, int l) const {
    if (!contains(k, l)) {
      throw Error(ErrorKind::DimensionMismatch,
                  "index (" + std::to_string(k) + ", " + std::to_string(l) + ") outside " +
                      std::to_string(K_) + "x" + std::to_string(L_));
    }
  }

  int K_ = 0;
  int L_ = 0;
  std::vector<T> data_;
};

/// Positions and unit normals on a K x L window. Periodic closure is
/// represented by duplicated seam vertices; `meta` records provenance.
class QuadNet {
 public:
  QuadNet() : QuadNet(Dims{1, 1}) {}
  explicit QuadNet(Dims dims);

  Dims dims() const { return dims_; }
  int K() const { return dims_.K; }
  int L() const { return dims_.L; }

  Vec3& f(int k, int l) { return f_(k, l); }
  const Vec3& f(int k, int l) const { return f_(k, l); }
  Vec3& n(int k, int l) { return n_(k, l); }
  const Vec3& n(int k, int l) const { return n_(k, l); }

  const Grid<Vec3>& positions() const { return f_; }
  const Grid<Vec3>& normals() const { return n_; }

  nlohmann::json& meta() { return meta_; }
  const nlohmann::json& meta() const { return meta_; }

  /// Throws InvariantViolation when a normal is not unit length.
  void check_invariants(double tol = tol::kDefault) const;

 private:
  Dims dims_;
  Grid<Vec3> f_;
  Grid<Vec3> n_;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// Lax data for a cK-net: unitary vertex variables s, edge variables l
/// (horizontal, (K-1) x L) and m (vertical, K x (L-1)), and the parameter
/// line angles delta1(k) for the edge k -> k+1 and delta2(l) for l -> l+1.
struct CknetLaxField {
  Dims dims;
  Grid<cplx> s;
  Grid<cplx> l;
  Grid<cplx> m;
  std::vector<cplx> delta1;
  std::vector<cplx> delta2;

  CknetLaxField() : CknetLaxField(Dims{1, 1}) {}
  explicit CknetLaxField(Dims d);

  /// |s| = 1 everywhere and array sizes match dims.
  void check_invariants(double tol = tol::kDefault) const;
};

/// Hirota data for an asymptotic K-net: phase h per vertex, delta_u for the
/// U edges k -> k+1 (constant along l) and delta_v for the V edges
/// l -> l+1 (constant along k). Only this split keeps det(V1 U) = det(U2 V).
struct KnetField {
  Dims dims;
  Grid<double> h;
  std::vector<double> delta_u;  // size K - 1
  std::vector<double> delta_v;  // size L - 1

  KnetField() : KnetField(Dims{1, 1}) {}
  explicit KnetField(Dims d)
      : dims(d), h(d.K, d.L, 0.0), delta_u(static_cast<std::size_t>(d.K - 1), 0.0),
        delta_v(static_cast<std::size_t>(d.L - 1), 0.0) {}
};

/// Frame Phi and its derivative with respect to t (lambda = e^t).
struct FrameState {
  Grid<Biquat> phi;
  Grid<Biquat> phi_dot;
  double t = 0.0;

  FrameState() = default;
  FrameState(Dims d, double t_) : phi(d.K, d.L), phi_dot(d.K, d.L), t(t_) {}
  Dims dims() const { return {phi.K(), phi.L()}; }
};

/// Sym formula at one vertex: f = 2 [Phi^{-1} dPhi]^{tr=0}, n = -i Phi^{-1} s3 Phi.
std::pair<Vec3, Vec3> sym_point(const Biquat& phi, const Biquat& phi_dot);

/// Applies the Sym formula to every vertex of a frame.
QuadNet sym_net(const FrameState& frame);

// --- file formats -----------------------------------------------------

nlohmann::json net_to_json(const QuadNet& net);
/// Throws ParseError (with the offending field), DimensionMismatch or
/// InvariantViolation.
QuadNet net_from_json(const nlohmann::json& j);

void net_io_write(const QuadNet& net, const std::filesystem::path& path);
QuadNet net_io_read(const std::filesystem::path& path);

nlohmann::json lax_to_json(const CknetLaxField& field);
CknetLaxField lax_from_json(const nlohmann::json& j);
void lax_io_write(const CknetLaxField& field, const std::filesystem::path& path);
CknetLaxField lax_io_read(const std::filesystem::path& path);

/// Wavefront OBJ with v / vn / f i//i records, 1-based, row-major faces.
void export_obj(const QuadNet& net, std::ostream& out);
void export_obj(const QuadNet& net, const std::filesystem::path& path);

/// Serialises JSON deterministically (shortest round-trip doubles).
std::string dump_json(const nlohmann::json& j);

}  // namespace cknet
