#include "doctest.h"

#include <algorithm>

#include "oneshot/channel.hpp"
#include "oneshot/distances.hpp"
#include "oneshot/random.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("distances") {

TEST_CASE("fidelity values") {
  CounterRng rng(21);
  const auto rho = random_density(rng, reg("A", 3));
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(ket0(), ket1()) == doctest::Approx(0.0));
  CHECK(fidelity(ket0(), mixed()) == doctest::Approx(0.7071068).epsilon(1e-7));
}

TEST_CASE("generalized fidelity") {
  CounterRng rng(22);
  const auto sub = random_density(rng, reg("A", 3)).scaled(0.6);
  CHECK(generalized_fidelity(sub, sub) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(generalized_fidelity(diag("A", {0.5, 0.0}), diag("A", {0.0, 0.5})) == doctest::Approx(0.5));
  for (int t = 0; t < 10; ++t) {
    const auto a = random_density(rng, reg("A", 2));
    const auto b = random_density(rng, reg("A", 2));
    CHECK(generalized_fidelity(a, b) == doctest::Approx(fidelity(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("purified distance values") {
  CounterRng rng(23);
  const auto rho = random_density(rng, reg("A", 2));
  CHECK(purified_distance(rho, rho) < 3e-8);
  CHECK(purified_distance(ket0(), ket1()) == doctest::Approx(1.0));
  CHECK(purified_distance(ket0(), mixed()) == doctest::Approx(0.7071068).epsilon(1e-7));
}

TEST_CASE("trace distance carries no factor one half") {
  CHECK(trace_distance(ket0(), ket1()) == doctest::Approx(2.0));
}

TEST_CASE("tight triangle check") {
  CounterRng rng(24);
  const auto s = random_density(rng, reg("A"));
  const auto t = random_density(rng, reg("A"));
  const auto same = tight_triangle_check(s, s, s);
  CHECK(same.applicable);
  CHECK(same.lhs < 3e-8);
  CHECK(same.rhs < 3e-8);

  const auto c = tight_triangle_check(s, s, t);
  CHECK(c.applicable);
  CHECK(c.rhs == doctest::Approx(purified_distance(s, t)).epsilon(1e-7));
  CHECK(c.lhs == doctest::Approx(c.rhs).epsilon(1e-7));

  int applicable = 0;
  for (int k = 0; k < 200; ++k) {
    const auto a = random_density(rng, reg("A"));
    const auto b = random_density(rng, reg("A"));
    const auto d = random_density(rng, reg("A"));
    const auto r = tight_triangle_check(a, b, d);
    if (!r.applicable) continue;
    ++applicable;
    CHECK(r.lhs <= r.rhs + 1e-9);
  }
  CHECK(applicable > 20);
}

TEST_CASE("sum-of-angles expression is monotone inside the quarter disc") {
  auto f = [](double e, double ep) { return e * std::sqrt(1 - ep * ep) + ep * std::sqrt(1 - e * e); };
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double e = static_cast<double>(i) / n, ep = static_cast<double>(j) / n;
      const double e2 = static_cast<double>(i + 1) / n, ep2 = static_cast<double>(j + 1) / n;
      if (e2 * e2 + ep * ep <= 1.0) CHECK(f(e2, ep) >= f(e, ep) - 1e-15);
      if (e * e + ep2 * ep2 <= 1.0) CHECK(f(e, ep2) >= f(e, ep) - 1e-15);
    }
  }
}

TEST_CASE("rescaling subnormalized states") {
  CounterRng rng(25);
  for (int t = 0; t < 100; ++t) {
    const double lam = 1.0 + 2.0 * rng.uniform();
    const auto rho = random_density(rng, reg("A", 3)).scaled(1.0 / lam);
    const auto sig = random_density(rng, reg("A", 3)).scaled(1.0 / lam);
    const double p = purified_distance(rho, sig);
    const double pl = purified_distance(rho.scaled(lam), sig.scaled(lam));
    CHECK(p <= pl + 1e-9);
    CHECK(pl <= std::sqrt(2.0 * lam) * p + 1e-9);
  }
}

TEST_CASE("classical-quantum fidelity averages the branches") {
  CounterRng rng(26);
  const int d = 3;
  HermitianOperator rho = HermitianOperator::diagonal(RegisterShape({"X", "A"}, {d, 2}), std::vector<double>(2 * d, 0));
  HermitianOperator sig = rho;
  double avg = 0.0;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0 / d;
    const auto ri = random_density(rng, reg("A"));
    const auto si = random_density(rng, reg("A"));
    rho = rho + tensor(diag("X", e), ri);
    sig = sig + tensor(diag("X", e), si);
    avg += fidelity(ri, si) / d;
  }
  CHECK(fidelity(rho, sig) == doctest::Approx(avg).epsilon(1e-10));
}

TEST_CASE("quasi-convexity and data processing") {
  CounterRng rng(27);
  for (int t = 0; t < 100; ++t) {
    const double lam = rng.uniform();
    const auto r1 = random_density(rng, reg("A")), r2 = random_density(rng, reg("A"));
    const auto t1 = random_density(rng, reg("A")), t2 = random_density(rng, reg("A"));
    const double mix = purified_distance(r1.scaled(lam) + r2.scaled(1 - lam), t1.scaled(lam) + t2.scaled(1 - lam));
    CHECK(mix <= std::max(purified_distance(r1, t1), purified_distance(r2, t2)) + 1e-9);

    const auto e = random_channel(rng, reg("A"), reg("B"), 2);
    const auto x = random_density(rng, RegisterShape({"A", "R"}, {2, 2}));
    const auto y = random_density(rng, RegisterShape({"A", "R"}, {2, 2}));
    CHECK(purified_distance(apply_channel(e, x), apply_channel(e, y)) <= purified_distance(x, y) + 1e-9);
  }
}

TEST_CASE("metric axioms on normalized states") {
  CounterRng rng(28);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_density(rng, reg("A", 3));
    const auto b = random_density(rng, reg("A", 3));
    const auto c = random_density(rng, reg("A", 3));
    CHECK(purified_distance(a, b) == doctest::Approx(purified_distance(b, a)).epsilon(1e-10));
    CHECK(purified_distance(a, c) <= purified_distance(a, b) + purified_distance(b, c) + 1e-9);
    CHECK(purified_distance(a, b) > 0.0);
  }
}

TEST_CASE("channel purified distance") {
  OptimizerConfig opt;
  opt.starts = 8;
  const auto id = identity_channel(reg("A"), reg("B"));
  const auto dep = depolarizing_channel(1.0, reg("A"), reg("B"));

  const auto self = channel_purified_distance(dep, dep, opt);
  CHECK(self.lower < 1e-6);
  CHECK(self.lower <= self.upper);

  const auto r = channel_purified_distance(id, dep, opt);
  CHECK(r.lower >= 0.8660254 - 1e-7);
  CHECK(r.lower <= r.upper);

  CounterRng rng(29);
  const auto u = unitary_channel(haar_unitary(rng, 2), reg("A"), reg("B"));
  const auto v = unitary_channel(haar_unitary(rng, 2), reg("A"), reg("B"));
  const auto full = channel_purified_distance_full(u, v, opt);
  CHECK(channel_distance_at(u, v, full.best_input) == doctest::Approx(full.interval.lower).epsilon(1e-12));
  for (int t = 0; t < 50; ++t) {
    const auto psi = random_pure(rng, RegisterShape({"A", "A'"}, {2, 2}));
    CHECK(channel_distance_at(u, v, psi) <= full.interval.upper + 1e-6);
  }
}

}  // TEST_SUITE
