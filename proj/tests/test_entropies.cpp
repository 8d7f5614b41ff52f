#include "doctest.h"

#include <cmath>

#include "oneshot/distances.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/random.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("entropies") {

TEST_CASE("von Neumann entropy and varentropy") {
  CHECK(von_neumann(mixed()).bits == doctest::Approx(1.0));
  CHECK(von_neumann(ket0()).bits == doctest::Approx(0.0));
  CHECK(von_neumann(diag("A", {0.75, 0.25})).bits == doctest::Approx(0.8112781).epsilon(1e-7));
  CHECK(varentropy(mixed("A", 3)).bits == doctest::Approx(0.0));
  CHECK(varentropy(ket0()).bits == doctest::Approx(0.0));
  CHECK(varentropy(diag("A", {0.75, 0.25})).bits == doctest::Approx(0.4710199).epsilon(1e-7));
}

TEST_CASE("relative entropy and its variance") {
  CounterRng rng(31);
  const auto rho = random_density(rng, reg("A", 3));
  CHECK(std::abs(relative_entropy(rho, rho).bits) < 1e-12);
  CHECK(std::abs(relative_entropy_variance(rho, rho).bits) < 1e-12);
  CHECK(relative_entropy(ket0(), mixed()).bits == doctest::Approx(1.0));
  CHECK(relative_entropy_variance(diag("A", {0.75, 0.25}), mixed()).bits ==
        doctest::Approx(0.4710199).epsilon(1e-7));
  const auto inf = relative_entropy(mixed(), ket0());
  CHECK_FALSE(inf.finite);
  CHECK(std::isinf(inf.bits));
}

TEST_CASE("max- and min-relative entropies") {
  CHECK(dmax(ket0(), mixed()).bits == doctest::Approx(1.0));
  CHECK_FALSE(dmax(mixed(), ket0()).finite);
  CHECK(dmin(ket0(), mixed()).bits == doctest::Approx(1.0));
  CounterRng rng(32);
  const auto rho = random_density(rng, reg("A", 3));
  CHECK(std::abs(dmax(rho, rho).bits) < 1e-9);
  CHECK(std::abs(dmin(rho, rho).bits) < 1e-9);
  for (int t = 0; t < 50; ++t) {
    const auto r = random_density(rng, reg("A", 3));
    const auto s = random_density(rng, reg("A", 3));
    const double lo = dmin(r, s).bits, mid = relative_entropy(r, s).bits, hi = dmax(r, s).bits;
    CHECK(lo <= mid + 1e-9);
    CHECK(mid <= hi + 1e-9);
  }
}

TEST_CASE("sandwiched Renyi endpoints") {
  CounterRng rng(33);
  const auto rho = random_density(rng, reg("A", 3));
  CHECK(std::abs(sandwiched_renyi(rho, rho, 0.7).bits) < 1e-9);
  for (int t = 0; t < 20; ++t) {
    const auto r = random_density(rng, reg("A", 3));
    const auto s = random_density(rng, reg("A", 3));
    const double f = fidelity(r, s);
    CHECK(sandwiched_renyi(r, s, 0.5).bits == doctest::Approx(-std::log2(f * f)).epsilon(1e-8));
    CHECK(sandwiched_renyi(r, s, 0.5).bits == doctest::Approx(dmin(r, s).bits).epsilon(1e-8));
    CHECK(sandwiched_renyi(r, s, std::numeric_limits<double>::infinity()).bits ==
          doctest::Approx(dmax(r, s).bits).epsilon(1e-8));
    double prev = -1e300;
    for (double a : {0.5, 0.7, 0.9, 1.5, 2.0, 4.0}) {
      const double v = sandwiched_renyi(r, s, a).bits;
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("mutual information and its variance") {
  const auto prod = tensor(diag("A", {0.3, 0.7}), diag("B", {0.6, 0.4}));
  CHECK(std::abs(mutual_information(prod, {"A"}).bits) < 1e-12);
  CHECK(mutual_information(bell(), {"A"}).bits == doctest::Approx(2.0));
  CHECK(std::abs(mutual_information_variance(bell(), {"A"}).bits) < 1e-12);
  CHECK(mutual_information_variance(schmidt_qubits(0.75).projector(), {"A"}).bits ==
        doctest::Approx(1.8840795).epsilon(1e-7));
}

TEST_CASE("max-information") {
  const auto prod = tensor(diag("A", {0.3, 0.7}), diag("B", {0.6, 0.4}));
  CHECK(std::abs(imax(prod, diag("A", {0.3, 0.7})).bits) < 1e-7);

  const auto r = imax_certified(bell(), mixed("A"));
  CHECK(r.value.bits == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.certificate.feasibility_residual >= -1e-9);
  CHECK(r.certificate.relative_gap <= 1e-7);

  CounterRng rng(34);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random_density(rng, RegisterShape({"A", "B", "C"}, {2, 2, 2}));
    const auto tau = marginal(rho, {"A"});
    const double ab = imax(marginal(rho, {"A", "B"}), tau).bits;
    const double abc = imax(rho, tau).bits;
    CHECK(ab <= abc + 1e-6);
    CHECK(abc <= ab + 2.0 + 1e-6);
  }
}

TEST_CASE("Renyi mutual information duality on pure tripartite states") {
  CounterRng rng(35);
  for (int t = 0; t < 5; ++t) {
    const auto psi = random_pure(rng, RegisterShape({"A", "B", "C"}, {2, 2, 2})).projector();
    const auto tau = random_density(rng, reg("A"));
    const auto inf = renyi_mutual_information(marginal(psi, {"A", "B"}), tau, std::numeric_limits<double>::infinity());
    const auto half = renyi_mutual_information(marginal(psi, {"A", "C"}), geninv_op(tau), 0.5);
    CHECK(inf.value.bits == doctest::Approx(-half.value.bits).epsilon(1e-6));
  }
  const auto prod = tensor(diag("A", {0.3, 0.7}), diag("B", {0.6, 0.4}));
  CHECK(std::abs(renyi_mutual_information(prod, diag("A", {0.3, 0.7}), std::numeric_limits<double>::infinity())
                     .value.bits) < 1e-7);
}

TEST_CASE("pure-state variance identities") {
  CounterRng rng(36);
  for (int t = 0; t < 100; ++t) {
    const auto psi = random_pure(rng, RegisterShape({"A", "B"}, {3, 3})).projector();
    const auto ra = marginal(psi, {"A"});
    const auto rb = marginal(psi, {"B"});
    const double va = varentropy(ra).bits;
    CHECK(mutual_information_variance(psi, {"A"}).bits == doctest::Approx(4.0 * va).epsilon(1e-8));
    const auto ref = tensor(HermitianOperator::identity(ra.shape()), rb);
    CHECK(relative_entropy_variance(psi, ref).bits == doctest::Approx(va).epsilon(1e-8));
  }
}

TEST_CASE("mutual information variance bound") {
  CounterRng rng(37);
  for (int t = 0; t < 100; ++t) {
    const int da = 2 + static_cast<int>(rng.uniform() * 2);
    const auto rho = random_density(rng, RegisterShape({"A", "B"}, {da, 2}));
    const double l = std::log2(2.0 * da + 1.0);
    CHECK(mutual_information_variance(rho, {"A"}).bits <= 4.0 * l * l);
  }
}

}  // TEST_SUITE
