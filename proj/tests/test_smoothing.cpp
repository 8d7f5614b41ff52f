#include "doctest.h"

#include <cmath>

#include "oneshot/entropies.hpp"
#include "oneshot/random.hpp"
#include "oneshot/smoothing.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("smoothing") {

TEST_CASE("smoothed max-divergence bracket") {
  CounterRng rng(51);
  const auto r = random_density(rng, reg("A", 2));
  const auto s = random_density(rng, reg("A", 2));
  const auto b0 = dmax_smoothed_bounds(r, s, 0.0);
  CHECK(b0.contains(dmax(r, s).bits));

  const auto b = dmax_smoothed_bounds(diag("A", {0.75, 0.25}), mixed(), 0.1);
  CHECK(b.contains(oracle_dmax({0.75, 0.25}, {0.5, 0.5}, 0.1)));

  for (int t = 0; t < 20; ++t) {
    const auto x = random_density(rng, reg("A", 3));
    const auto y = random_density(rng, reg("A", 3));
    const auto bi = dmax_smoothed_bounds(x, y, 0.2);
    CHECK(bi.lower <= bi.upper);
    CHECK(std::isfinite(bi.width()));
  }
}

TEST_CASE("smoothed min-divergence bracket") {
  CounterRng rng(52);
  const auto r = random_density(rng, reg("A", 2));
  const auto s = random_density(rng, reg("A", 2));
  CHECK(dmin_smoothed_lower(r, s, 1e-6) <= dmin_smoothed_upper(r, s, 1e-6));
  CHECK(dmin_smoothed_lower(r, s, 1e-6) == doctest::Approx(dmin(r, s).bits));

  const auto b = dmin_smoothed_bounds(diag("A", {0.8, 0.2}), diag("A", {0.3, 0.7}), 0.2, 2.0);
  CHECK(b.contains(oracle_dmin({0.8, 0.2}, {0.3, 0.7}, 0.2)));
}

TEST_CASE("smoothed min-divergence domain is eps <= 1/sqrt(k)") {
  const auto r = diag("A", {0.8, 0.2});
  const auto s = mixed();
  CHECK_NOTHROW(dmin_smoothed_upper(r, s, 0.5, 2.0));
  CHECK_NOTHROW(dmin_smoothed_upper(r, s, 0.6, 2.0));
  CHECK_NOTHROW(dmin_smoothed_upper(r, s, 1.0 / std::sqrt(2.0), 2.0));
  CHECK_THROWS_AS(dmin_smoothed_upper(r, s, 0.72, 2.0), DomainError);
  CHECK_THROWS_AS(dmin_smoothed_upper(r, s, 0.6, 3.0), DomainError);
  CHECK_THROWS_AS(dmin_smoothed_upper(r, s, 0.1, 1.0), DomainError);
}

TEST_CASE("partially smoothed max-information") {
  const double eps = 0.2;
  const auto prod = tensor(diag("B", {0.6, 0.4}), diag("R", {0.3, 0.7}));
  const auto bp = imax_partially_smoothed_bounds(prod, {"R"}, 1, eps);
  const double d = eps / 2;
  CHECK(bp.lower <= 1e-9);
  CHECK(bp.upper >= -1e-9);
  // The D_h term of the upper end is exact on product states: D_h^{1-x}(rho||rho) = -log x.
  const double x = (eps / 4) * (eps / 4);
  CHECK(bp.upper <= std::log2((8 + d * d) / (d * d)) - std::log2(x) - std::log2(1 - x) + 1e-9);

  const auto ent = bell().relabeled(RegisterShape({"B", "R"}, {2, 2}));
  const auto be = imax_partially_smoothed_bounds(ent, {"R"}, 1, 1e-3);
  CHECK(be.contains(imax(ent, marginal(ent, {"R"})).bits));

  const auto corr = HermitianOperator::diagonal(RegisterShape({"B", "R"}, {2, 2}), {0.4, 0.1, 0.1, 0.4});
  double prev = 1e300;
  for (int n : {1, 8, 64}) {
    const auto bn = imax_partially_smoothed_bounds(corr, {"R"}, n, eps);
    CHECK(bn.lower <= bn.upper);
    CHECK(bn.width() / n < prev);
    prev = bn.width() / n;
  }
}

TEST_CASE("exact smoothing oracle") {
  CHECK(oracle_dmax({0.75, 0.25}, {0.5, 0.5}, 0.0) == doctest::Approx(dmax(diag("A", {0.75, 0.25}), mixed()).bits));
  CHECK(oracle_dmin({0.75, 0.25}, {0.5, 0.5}, 0.0) == doctest::Approx(dmin(diag("A", {0.75, 0.25}), mixed()).bits));

  double prev = oracle_dmax({1.0, 0.0}, {0.5, 0.5}, 0.0);
  for (double e = 0.05; e <= 0.3 + 1e-12; e += 0.05) {
    const double v = oracle_dmax({1.0, 0.0}, {0.5, 0.5}, e);
    CHECK(v < prev);
    prev = v;
  }

  double up = oracle_dmin({0.7, 0.2, 0.1}, {0.2, 0.3, 0.5}, 0.0);
  for (double e = 0.05; e <= 0.5 + 1e-12; e += 0.05) {
    const double v = oracle_dmin({0.7, 0.2, 0.1}, {0.2, 0.3, 0.5}, e);
    CHECK(v >= up - 1e-9);
    up = v;
  }
}

TEST_CASE("min and max smoothing are linked through the angle penalty") {
  CounterRng rng(53);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_probability(rng, 3);
    const auto q = random_probability(rng, 3);
    for (double e : {0.1, 0.3, 0.6}) {
      for (double ep : {0.1, 0.3, 0.6}) {
        if (e * e + ep * ep > 1.0) continue;
        CHECK(oracle_dmin(p, q, e) <= oracle_dmax(p, q, ep) + dmin_dmax_penalty(e, ep) + 1e-6);
      }
    }
  }
}

TEST_CASE("penalty closed forms") {
  const double e = 0.3, k = 2.0;
  const double direct = -std::log2(1 - std::pow(e * e * std::sqrt(k) + std::sqrt(1 - k * e * e) * std::sqrt(1 - e * e), 2));
  CHECK(dmin_hypothesis_penalty(e, k) == doctest::Approx(direct).epsilon(1e-12));
  const double ep = 0.4;
  const double s = e * std::sqrt(1 - ep * ep) + ep * std::sqrt(1 - e * e);
  CHECK(dmin_dmax_penalty(e, ep) == doctest::Approx(-std::log2(1 - s * s)).epsilon(1e-12));
  CHECK_THROWS_AS(dmin_dmax_penalty(0.8, 0.8), DomainError);
}

}  // TEST_SUITE
