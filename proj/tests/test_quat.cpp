#include <doctest.h>

#include "cknet/error.hpp"
#include "cknet/quat.hpp"
#include "oracles.hpp"

using namespace cknet;

namespace {

Biquat random_biquat(oracle::Rng& rng) {
  return {rng.complex(2), rng.complex(2), rng.complex(2), rng.complex(2)};
}

Biquat random_unit_quaternion(oracle::Rng& rng) {
  Biquat q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return q / std::sqrt(q.det());
}

double dist(const Biquat& a, const Biquat& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("identity and Hamilton relations") {
  oracle::Rng rng(1);
  const Biquat q = random_biquat(rng);
  CHECK(dist(Biquat::identity() * q, q) == 0.0);
  const Biquat i = Biquat::basis(1), j = Biquat::basis(2), k = Biquat::basis(3);
  CHECK(dist(i * j, k) == 0.0);
  CHECK(dist(j * k, i) == 0.0);
  CHECK(dist(k * i, j) == 0.0);
  CHECK(dist(i * i, -Biquat::identity()) == 0.0);
}

TEST_CASE("basis elements are -i sigma_k") {
  const oracle::M2* sig[3] = {&oracle::s1, &oracle::s2, &oracle::s3};
  for (int k = 1; k <= 3; ++k) {
    const auto m = oracle::from(Biquat::basis(k).matrix());
    const auto expected = oracle::scale(*sig[k - 1], -oracle::I);
    CHECK(oracle::max_abs(oracle::sub(m, expected)) == 0.0);
    CHECK(oracle::max_abs(oracle::sub(oracle::from(Biquat::pauli(k).matrix()), *sig[k - 1])) < 1e-15);
  }
}

TEST_CASE("matrix and coefficient forms round-trip") {
  oracle::Rng rng(2);
  for (int n = 0; n < 100; ++n) {
    const Biquat q = random_biquat(rng);
    CHECK(dist(Biquat::from_matrix(q.matrix()), q) < 1e-15);
  }
}

TEST_CASE("mul matches the 2x2 matrix product") {
  oracle::Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    const Biquat a = random_biquat(rng), b = random_biquat(rng);
    const auto expected = oracle::mul(oracle::from(a.matrix()), oracle::from(b.matrix()));
    CHECK(oracle::max_abs(oracle::sub(oracle::from(mul(a, b).matrix()), expected)) < 1e-12);
  }
}

TEST_CASE("mul is associative and det is multiplicative") {
  oracle::Rng rng(4);
  for (int n = 0; n < 200; ++n) {
    const Biquat a = random_biquat(rng), b = random_biquat(rng), c = random_biquat(rng);
    CHECK(dist((a * b) * c, a * (b * c)) < 1e-12);
    const cplx lhs = (a * b).det();
    const cplx rhs = a.det() * b.det();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    CHECK(std::abs(a.det() - a.matrix().det()) < 1e-12);
  }
}

TEST_CASE("quaternion determinant is a sum of squares") {
  oracle::Rng rng(5);
  for (int n = 0; n < 50; ++n) {
    const Biquat q{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(q.is_quaternion());
    CHECK(q.det().real() >= 0.0);
    CHECK(std::abs(q.det().imag()) < 1e-15);
  }
  CHECK_FALSE(Biquat(1.0, kI, 0.0, 0.0).is_quaternion());
}

TEST_CASE("inverse") {
  CHECK(dist(inverse(Biquat::identity()), Biquat::identity()) == 0.0);
  oracle::Rng rng(6);
  const Biquat u = random_unit_quaternion(rng);
  CHECK(dist(inverse(u), u.conj()) < 1e-15);
  for (int n = 0; n < 100; ++n) {
    const Biquat a = random_biquat(rng);
    CHECK(dist(a * inverse(a), Biquat::identity()) < 1e-12);
  }
  CHECK_THROWS_AS(inverse(Biquat::zero()), Error);
  try {
    inverse(Biquat(1.0, kI, 0.0, 0.0));  // 1 + i^2 = 0
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMatrix);
  }
}

TEST_CASE("trace_free and embed") {
  CHECK(trace_free(Biquat::identity()) == Vec3{0, 0, 0});
  CHECK(trace_free(Biquat::basis(3)) == Vec3{0, 0, 1});
  CHECK(trace_free(Biquat::scalar(5.0) + Biquat::basis(1)) == Vec3{1, 0, 0});
  const Vec3 v{0.25, -3.5, 7.0};
  CHECK(Biquat::embed(v)[0] == cplx(0.0));
  CHECK(trace_free(Biquat::embed(v)) == v);
  try {
    trace_free(Biquat(0.0, kI, 0.0, 0.0));
    FAIL("expected NonRealImage");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonRealImage);
  }
}

TEST_CASE("conjugate_normal") {
  CHECK(conjugate_normal(Biquat::identity()) == Vec3{0, 0, 1});
  // sigma_1 sigma_3 sigma_1 = -sigma_3
  const Vec3 n = conjugate_normal(Biquat::basis(1));
  CHECK(norm(n - Vec3{0, 0, -1}) < 1e-15);
  oracle::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Biquat q = random_unit_quaternion(rng);
    const Vec3 m = conjugate_normal(q);
    CHECK(std::abs(norm(m) - 1.0) < 1e-12);
    CHECK(norm(m - oracle::sym_n(oracle::from(q.matrix()))) < 1e-12);
    const double c = rng.uniform(0.1, 10) * rng.sign();
    CHECK(norm(conjugate_normal(q * c) - m) < 1e-14);
  }
}

TEST_CASE("unit-determinant rescaling and its derivative") {
  oracle::Rng rng(8);
  const Biquat a0 = random_biquat(rng), a1 = random_biquat(rng);
  const auto at = [&](double t) { return a0 + a1 * t; };
  const double t = 0.3, h = 1e-6;
  const auto [n, dn] = normalize_unit_det(at(t), a1);
  CHECK(std::abs(n.det() - 1.0) < 1e-12);
  const Biquat fd = (normalize_unit_det(at(t + h), a1).value - normalize_unit_det(at(t - h), a1).value) / (2 * h);
  CHECK(dist(fd, dn) < 1e-7);
}

TEST_CASE("error kinds format and classify") {
  const Error e(ErrorKind::DegenerateEvolution, "s12");
  CHECK(std::string(e.what()) == "DegenerateEvolution: s12");
  CHECK(is_numerical(ErrorKind::SingularMatrix));
  CHECK_FALSE(is_numerical(ErrorKind::ParseError));
}
