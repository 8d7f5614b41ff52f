#include "doctest.h"

#include "oneshot/random.hpp"
#include "oneshot/registers.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("qregisters") {

TEST_CASE("tensor products") {
  const auto i2 = HermitianOperator::identity(reg("A"));
  const auto i4 = tensor(i2, HermitianOperator::identity(reg("B")));
  CHECK(i4.shape() == RegisterShape({"A", "B"}, {2, 2}));
  CHECK(max_abs(i4.matrix() - Matrix::Identity(4, 4)) == 0.0);

  const auto x = tensor(ket0("A"), mixed("B"));
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = want(1, 1) = 0.5;
  CHECK(max_abs(x.matrix() - want) == 0.0);

  CounterRng rng(11);
  for (int da : {2, 3}) {
    const auto a = random_hermitian(rng, reg("A", da));
    const auto b = random_hermitian(rng, reg("B", da));
    CHECK(tensor(a, b).trace() == doctest::Approx(a.trace() * b.trace()).epsilon(1e-12));
  }
}

TEST_CASE("tensor rejects repeated labels") {
  CHECK_THROWS_AS(tensor(ket0("A"), ket0("A")), DomainError);
}

TEST_CASE("partial trace") {
  CounterRng rng(12);
  const auto ra = random_density(rng, reg("A", 3));
  const auto rb = random_density(rng, reg("B", 2));
  CHECK(max_abs(partial_trace(tensor(ra, rb), {"B"}).matrix() - ra.matrix()) < 1e-14);

  CHECK(max_abs(partial_trace(bell(), {"B"}).matrix() - Matrix::Identity(2, 2) * 0.5) < 1e-15);

  const auto rab = random_density(rng, RegisterShape({"A", "B"}, {3, 2}));
  const auto t = partial_trace(partial_trace(rab, {"A"}), {"B"});
  CHECK(t.dim() == 1);
  CHECK(t.trace() == doctest::Approx(rab.trace()).epsilon(1e-14));
}

TEST_CASE("partial trace keeps surviving order") {
  CounterRng rng(13);
  const auto x = random_density(rng, RegisterShape({"C", "A", "B"}, {2, 3, 2}));
  CHECK(partial_trace(x, {"A"}).shape().labels() == std::vector<std::string>{"C", "B"});
}

TEST_CASE("tensor and partial trace are adjoint") {
  CounterRng rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_hermitian(rng, RegisterShape({"A", "B"}, {2, 3}));
    const auto a = random_hermitian(rng, reg("A"));
    const auto lhs = (embed(a, x.shape()).matrix() * x.matrix()).trace();
    const auto rhs = (a.matrix() * partial_trace(x, {"B"}).matrix()).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("purification") {
  const auto p0 = purify(ket0("A"), "R");
  CHECK(p0.shape().labels() == std::vector<std::string>{"A", "R"});
  CHECK(std::abs(p0.amplitudes()(0)) == doctest::Approx(1.0));

  const auto pm = purify(mixed("A"), "R");
  CHECK(max_abs(partial_trace(pm.projector(), {"R"}).matrix() - Matrix::Identity(2, 2) * 0.5) < 1e-14);
  CHECK(max_abs(partial_trace(pm.projector(), {"A"}).matrix() - Matrix::Identity(2, 2) * 0.5) < 1e-14);

  const auto pq = purify(diag("A", {0.75, 0.25}), "R");
  CHECK(std::abs(pq.amplitudes()(0) - std::sqrt(0.75)) < 1e-14);
  CHECK(std::abs(pq.amplitudes()(3) - std::sqrt(0.25)) < 1e-14);
  CHECK(std::abs(pq.amplitudes()(1)) + std::abs(pq.amplitudes()(2)) < 1e-14);

  CounterRng rng(15);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random_density(rng, RegisterShape({"A", "B"}, {2, 3}));
    const auto psi = purify(rho, "R");
    CHECK(max_abs(partial_trace(psi.projector(), {"R"}).matrix() - rho.matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(purify(ket0("A"), "A"), DomainError);
}

TEST_CASE("eigen decomposition") {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const auto ez = eig_hermitian(z);
  CHECK(ez.values(0) == doctest::Approx(-1.0));
  CHECK(ez.values(1) == doctest::Approx(1.0));
  const auto ei = eig_hermitian(Matrix::Identity(2, 2).eval());
  CHECK(ei.values(0) == doctest::Approx(1.0));
  CHECK(ei.values(1) == doctest::Approx(1.0));

  CounterRng rng(16);
  const auto h = random_hermitian(rng, reg("A", 4));
  const auto es = eig_hermitian(h);
  const Matrix back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  CHECK(max_abs(back - h.matrix()) < 1e-12);
  CHECK(max_abs(es.vectors.adjoint() * es.vectors - Matrix::Identity(4, 4)) < 1e-12);

  const auto ed = eig_hermitian(diag("A", {0.3, -0.7, 0.1}));
  CHECK(ed.values(0) == doctest::Approx(-0.7));
  CHECK(ed.values(1) == doctest::Approx(0.1));
  CHECK(ed.values(2) == doctest::Approx(0.3));
}

TEST_CASE("matrix functions") {
  CHECK(max_abs(sqrt_op(diag("A", {4.0, 9.0})).matrix() - diag("A", {2.0, 3.0}).matrix()) < 1e-14);
  CHECK(max_abs(geninv_op(diag("A", {0.5, 0.0})).matrix() - diag("A", {2.0, 0.0}).matrix()) < 1e-14);
  CHECK(max_abs(positive_part_projector(diag("A", {0.3, -0.2})).matrix() - diag("A", {1.0, 0.0}).matrix()) <
        1e-14);
  CHECK(max_abs(log2_op(diag("A", {0.5, 0.0})).matrix() - diag("A", {-1.0, 0.0}).matrix()) < 1e-14);
}

TEST_CASE("hermiticity is enforced") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator(reg("A"), m), DomainError);
  CHECK_THROWS_AS(DensityState(diag("A", {0.5, 0.4})), DomainError);
  CHECK_NOTHROW(SubnormalizedState(diag("A", {0.5, 0.4})));
  CHECK_THROWS_AS(SubnormalizedState(diag("A", {0.5, -0.1})), DomainError);
}

}  // TEST_SUITE
