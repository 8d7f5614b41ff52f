#include "doctest.h"

#include <cmath>

#include "oneshot/distances.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/protocols.hpp"
#include "oneshot/random.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

namespace {

HermitianOperator correlated_br() {
  return HermitianOperator::diagonal(RegisterShape({"B", "R"}, {2, 2}), {0.45, 0.05, 0.1, 0.4});
}

std::vector<Matrix> random_povm(CounterRng& rng, int d, int k) {
  std::vector<Matrix> g(k);
  Matrix s = Matrix::Zero(d, d);
  for (auto& m : g) {
    const Matrix x = ginibre(rng, d, d);
    m = x * x.adjoint();
    s += m;
  }
  const Matrix w = power_psd(s, -0.5);
  for (auto& m : g) m = w * m * w;
  return g;
}

}  // namespace

TEST_SUITE("protocols") {

TEST_CASE("convex split on a product state") {
  ConvexSplitInstance inst{tensor(diag("B", {0.6, 0.4}), diag("R", {0.3, 0.7})), {"B"}, diag("B", {0.6, 0.4}), 1, 1.0};
  const auto c = convex_split_check(inst);
  CHECK(c.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.pass);
  CHECK(max_abs(convex_split_state(inst).matrix() - inst.rho_br.matrix()) < 1e-15);
}

TEST_CASE("convex split meets its bound at the hypothesis block count") {
  const auto rho = correlated_br();
  const auto sigma = marginal(rho, {"B"});
  const double c = dmax(rho, tensor(sigma, marginal(rho, {"R"}))).bits;
  const int n = static_cast<int>(std::ceil(std::exp2(c + 1.0)));
  const auto chk = convex_split_check({rho, {"B"}, sigma, n, 0.5});
  CHECK(chk.hypothesis);
  CHECK(chk.pass);
  CHECK(chk.fidelity >= std::sqrt(0.5) - 1e-9);
}

TEST_CASE("convex split fidelity grows with the block count") {
  const auto rho = correlated_br();
  const auto sigma = marginal(rho, {"B"});
  double prev = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const double f = convex_split_check({rho, {"B"}, sigma, n, 0.5}).fidelity;
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
}

TEST_CASE("state splitting block count and cost") {
  for (double d : {0.0, 0.7, 1.9}) {
    for (double delta : {0.1, 0.5, 1.0}) {
      const long long n = convex_split_blocks(d, delta);
      CHECK(std::log2(static_cast<double>(n)) >= d + std::log2(1.0 / delta) - 1e-12);
      CHECK(convex_split_cost(n) <= 0.5 * d + std::log2(2.0 / delta) + 1e-12);
    }
  }
  CHECK(convex_split_cost(16) == doctest::Approx(2.0));
  CHECK_THROWS_AS(convex_split_blocks(1.0, 0.0), DomainError);
}

TEST_CASE("de Finetti objects") {
  const auto one = de_finetti(1, 3);
  CHECK(max_abs(one.zeta.matrix() - Matrix::Identity(3, 3) / 3.0) < 1e-15);

  const auto two = de_finetti(2, 2);
  CHECK(two.g == 10u);
  CHECK(two.sym_dimension == doctest::Approx(3.0));
  CHECK(two.g_bound == doctest::Approx(27.0));
  Matrix sym = (Matrix::Identity(4, 4) + permutation_operator(2, {1, 0})) / 2.0;
  CHECK(max_abs(two.zeta.matrix() - sym / 3.0) < 1e-15);

  CHECK(binomial(7, 3) == 35u);
  CHECK(postselection_factor(2, 2) == doctest::Approx(std::sqrt(20.0)));
  CHECK(postselection_factor(2, 2) <= postselection_factor_bound(2, 2));
  CHECK(de_finetti_monte_carlo(two, 4000, 3) < 0.05);
}

TEST_CASE("symmetrized channels are covariant") {
  CounterRng rng(71);
  const RegisterShape in({"A1", "A2"}, {2, 2}), out({"B1", "B2"}, {2, 2});
  const auto t = random_channel(rng, in, out, 3);
  const auto rho = random_density(rng, reg("A"));
  const auto sig = random_density(rng, reg("B"));
  const auto input = tensor(rho.relabeled(reg("A1")), rho.relabeled(reg("A2")));
  const auto target = tensor(sig.relabeled(reg("B1")), sig.relabeled(reg("B2")));
  const auto c = symmetrize_check(t, 2, {{1, 0}}, input, target);
  CHECK(c.covariant_residual <= 1e-10);
  CHECK(c.p_symmetrized <= c.p_original + 1e-9);

  const auto id = identity_channel(in, out);
  CHECK(symmetrize_check(id, 2, {{1, 0}}, input, target).covariant_residual <= 1e-15);
}

TEST_CASE("teleportation coding bound") {
  const auto full = teleport_coding_check(1.0, 2, 50, 1);
  CHECK(full.bound == 0.0);
  CHECK(full.pass);
  const auto part = teleport_coding_check(0.75, 2, 200, 2);
  CHECK(part.bound == doctest::Approx(0.5));
  CHECK(part.worst <= 0.5 + 1e-9);
  const auto none = teleport_coding_check(0.0, 2, 50, 3);
  CHECK(none.bound == doctest::Approx(1.0));
  CHECK(none.pass);
}

TEST_CASE("strong converse") {
  std::vector<Matrix> states{diag("A", {1.0, 0.0}).matrix(), diag("A", {0.0, 1.0}).matrix()};
  const auto orth = strong_converse_check(states, states, 1.0, 2, 1);
  CHECK(orth.p_succ == doctest::Approx(1.0));
  CHECK(orth.bound == doctest::Approx(1.0));
  CHECK(orth.pass);

  CounterRng rng(72);
  for (int t = 0; t < 100; ++t) {
    std::vector<Matrix> code;
    for (int k = 0; k < 4; ++k) code.push_back(random_density(rng, reg("A")).matrix());
    const auto r = strong_converse_check(code, random_povm(rng, 2, 4), 2.0, 2, 1);
    CHECK(r.p_succ <= 0.5 + 1e-12);
    CHECK(r.pass);
  }
}

TEST_CASE("coding converse chain") {
  CHECK(coding_converse_chain(0.0) == doctest::Approx(1.0));
  CHECK(coding_converse_slope() == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-15));
  for (int i = 1; i <= 2000; ++i) {
    const double e = 0.2 * i / 2000.0;
    CHECK(coding_converse_chain(e) <= 1.0 - coding_converse_slope() * e + e * e);
  }
  const double h = 1e-7;
  CHECK((1.0 - coding_converse_chain(h)) / h == doctest::Approx(coding_converse_slope()).epsilon(1e-4));
}

TEST_CASE("channel simulation fudge term") {
  CHECK(channel_sim_radius(0.1, 2, 1) == doctest::Approx(0.1 / std::sqrt(2.0) * std::pow(2.0, -1.5)));
  CHECK(channel_sim_fudge(0.1, 2, 10) > channel_sim_fudge(0.1, 2, 1));
  CHECK(channel_sim_fudge(0.2, 2, 10) < channel_sim_fudge(0.1, 2, 10));
  CHECK_THROWS_AS(channel_sim_radius(0.0, 2, 1), DomainError);
}

}  // TEST_SUITE
