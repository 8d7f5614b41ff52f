#include "doctest.h"

#include <cmath>

#include "oneshot/channel.hpp"
#include "oneshot/hypotest.hpp"
#include "oneshot/random.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("hypotest") {

TEST_CASE("hypothesis testing divergence values") {
  CounterRng rng(41);
  const auto rho = random_density(rng, reg("A", 3));
  CHECK(dh(rho, rho, 0.5).bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dh(rho, rho, 0.2).bits == doctest::Approx(-std::log2(0.8)).epsilon(1e-12));
  CHECK(dh(ket0(), mixed(), 0.5).bits == doctest::Approx(2.0).epsilon(1e-12));

  const auto r2 = tensor(diag("B1", {0.75, 0.25}), diag("B2", {0.75, 0.25}));
  const auto s2 = tensor(mixed("B1"), mixed("B2"));
  CHECK(dh(r2, s2, 0.1).bits == doctest::Approx(-std::log2(0.70)).epsilon(1e-12));
  CHECK(dh(r2, s2, 0.1).bits == doctest::Approx(0.5145732).epsilon(1e-7));
}

TEST_CASE("optimal test is feasible and attains beta") {
  CounterRng rng(42);
  for (int t = 0; t < 20; ++t) {
    const auto r = random_density(rng, reg("A", 4));
    const auto s = random_density(rng, reg("A", 4));
    const auto res = dh_full(r, s, ErrorParam::from_eps(0.15));
    REQUIRE(res.test.rows() == 4);
    const auto es = eig_hermitian(res.test);
    CHECK(es.values.minCoeff() >= -1e-10);
    CHECK(es.values.maxCoeff() <= 1.0 + 1e-10);
    CHECK((res.test * r.matrix()).trace().real() >= 0.85 - 1e-10);
    CHECK(-std::log2((res.test * s.matrix()).trace().real()) == doctest::Approx(res.value.bits).epsilon(1e-9));
  }
}

TEST_CASE("complement parameterization avoids cancellation") {
  const auto r = diag("A", {0.75, 0.25});
  const auto s = mixed();
  CHECK(dh(r, s, ErrorParam::from_complement(1e-12)).bits == doctest::Approx(-std::log2(2e-12 / 3.0)).epsilon(1e-9));
}

TEST_CASE("monotone in eps and under channels") {
  CounterRng rng(43);
  for (int t = 0; t < 20; ++t) {
    const auto r = random_density(rng, reg("A", 3));
    const auto s = random_density(rng, reg("A", 3));
    double prev = -1e300;
    for (double e : {0.01, 0.05, 0.1, 0.3, 0.6, 0.9}) {
      const double v = dh(r, s, e).bits;
      CHECK(v >= prev - 1e-10);
      prev = v;
    }
    const auto ch = random_channel(rng, reg("A", 3), reg("B", 2), 2);
    CHECK(dh(ch.apply(r), ch.apply(s), 0.2).bits <= dh(r, s, 0.2).bits + 1e-9);
  }
}

TEST_CASE("type-class evaluation") {
  ClassicalIIDSpec same{{0.3, 0.7}, {0.3, 0.7}, 5};
  CHECK(dh_classical_iid(same, 0.2).bits == doctest::Approx(-std::log2(0.8)).epsilon(1e-10));

  ClassicalIIDSpec two{{0.75, 0.25}, {0.5, 0.5}, 2};
  CHECK(dh_classical_iid(two, 0.1).bits == doctest::Approx(0.5145732).epsilon(1e-7));

  ClassicalIIDSpec one{{0.2, 0.5, 0.3}, {0.4, 0.4, 0.2}, 1};
  CHECK(dh_classical_iid(one, 0.1).bits ==
        doctest::Approx(dh(diag("A", one.p), diag("A", one.q), 0.1).bits).epsilon(1e-12));

  CounterRng rng(44);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_probability(rng, 2);
    const auto q = random_probability(rng, 2);
    const int n = 1 + static_cast<int>(rng.uniform() * 8);
    const double eps = 0.05 + 0.5 * rng.uniform();
    const auto r = tensor_power(diag("A", p), n);
    const auto s = tensor_power(diag("A", q), n);
    CHECK(std::abs(dh_classical_iid({p, q, n}, eps).bits - dh(r, s, eps).bits) < 1e-10);
  }
}

TEST_CASE("information spectrum") {
  CounterRng rng(45);
  const auto rho = random_density(rng, reg("A", 3));
  CHECK(info_spectrum(rho, rho, 0.3).bits == doctest::Approx(std::log2(0.3)).epsilon(1e-9));
  // Flat spectrum: Tr(I/4 - 2^g I)_+ = 1 - 4·2^g, so the entropy is log 4 - log eps.
  for (double e : {0.1, 0.5, 0.9})
    CHECK(info_spectrum_entropy(mixed("A", 4), e).bits == doctest::Approx(2.0 - std::log2(e)).epsilon(1e-9));
  for (int t = 0; t < 50; ++t) {
    const auto r = random_density(rng, reg("A", 3));
    const auto s = random_density(rng, reg("A", 3));
    const double eps = 0.05 + 0.9 * rng.uniform();
    CHECK(dh(r, s, eps / 2).bits + std::log2(eps / 2) <= info_spectrum(r, s, eps).bits + 1e-9);
  }
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(dh(ket0(), mixed(), 1.5), DomainError);
  CHECK_THROWS_AS(dh(ket0(), mixed("A", 3), 0.1), DomainError);
}

}  // TEST_SUITE
