#include "doctest.h"

#include <cmath>

#include "oneshot/channel.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/qchannels.hpp"
#include "oneshot/random.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

namespace {
OptimizerConfig quick(int starts = 16) {
  auto o = channel_optimizer_defaults();
  o.starts = starts;
  return o;
}
}  // namespace

TEST_SUITE("qchannels") {

TEST_CASE("channel action") {
  CounterRng rng(61);
  const auto rho = random_density(rng, reg("A"));
  const auto id = identity_channel(reg("A"), reg("B"));
  CHECK(max_abs(id.apply(rho).matrix() - rho.matrix()) < 1e-15);
  const auto dep = depolarizing_channel(1.0, reg("A"), reg("B"));
  CHECK(max_abs(dep.apply(rho).matrix() - Matrix::Identity(2, 2) * 0.5) < 1e-15);
  CHECK(dep.apply(rho).shape() == reg("B"));
}

TEST_CASE("Stinespring, Choi and Kraus views agree") {
  CounterRng rng(62);
  for (int t = 0; t < 10; ++t) {
    const auto ch = random_channel(rng, reg("A", 2), reg("B", 3), 3);
    const Matrix v = ch.stinespring();
    CHECK(max_abs(v.adjoint() * v - Matrix::Identity(2, 2)) < 1e-10);

    const auto choi = ch.choi();
    CHECK(max_abs(partial_trace(choi, {"B"}).matrix() - Matrix::Identity(2, 2) * 0.5) < 1e-10);

    const auto rho = random_density(rng, reg("A", 2));
    const Matrix viaV = v * rho.matrix() * v.adjoint();
    const auto full = HermitianOperator(ch.out_shape().concat(ch.environment_shape()), viaV);
    CHECK(max_abs(partial_trace(full, ch.environment_shape().labels()).matrix() - ch.apply(rho).matrix()) < 1e-10);
    CHECK(max_abs(partial_trace(full, {"B"}).matrix() - ch.complementary().apply(rho).matrix()) < 1e-10);

    const auto psi = maximally_entangled_input(reg("A", 2));
    CHECK(max_abs(channel_output(ch, psi).matrix() - choi.matrix()) < 1e-10);
  }
}

TEST_CASE("identity channel functionals") {
  const auto f = channel_functionals(identity_channel(reg("A"), reg("B")), quick());
  CHECK(f.capacity_like == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(f.vmax) < 1e-6);
  for (const auto& psi : f.capacity_inputs)
    CHECK(std::abs(channel_mutual_information(identity_channel(reg("A"), reg("B")), psi) - 2 * f.capacity_like) <
          1e-6);
}

TEST_CASE("fully depolarizing channel functionals") {
  const auto dep = depolarizing_channel(1.0, reg("A"), reg("B"));
  const auto f = channel_functionals(dep, quick());
  CHECK(std::abs(f.capacity_like) < 1e-9);
  CounterRng rng(63);
  CHECK(std::abs(channel_mutual_information(dep, random_pure(rng, RegisterShape({"A", "A'"}, {2, 2})))) < 1e-9);
}

TEST_CASE("depolarizing channel is maximized by the maximally entangled input") {
  const auto dep = depolarizing_channel(0.5, reg("A"), reg("B"));
  const double mes = 0.5 * channel_mutual_information(dep, maximally_entangled_input(reg("A")));
  const auto f = channel_functionals(dep, quick());
  CHECK(f.capacity_like == doctest::Approx(mes).epsilon(1e-6));
  for (const auto& psi : f.capacity_inputs)
    CHECK(std::abs(channel_mutual_information(dep, psi) - 2 * f.capacity_like) <= 1e-6);
}

TEST_CASE("functionals are invariant under unitary pre- and post-processing") {
  CounterRng rng(64);
  const auto n = random_channel(rng, reg("A"), reg("B"), 2);
  const auto u = unitary_channel(haar_unitary(rng, 2), reg("A"), reg("A"));
  const auto w = unitary_channel(haar_unitary(rng, 2), reg("B"), reg("B"));
  const auto base = channel_functionals(n, quick());
  const auto rot = channel_functionals(u.then(n).then(w), quick());
  CHECK(rot.capacity_like == doctest::Approx(base.capacity_like).epsilon(1e-6));
}

TEST_CASE("meta-converse closed forms") {
  const auto id = identity_channel(reg("A"), reg("B"));
  const auto m = meta_converse_bound(id, 0.5, MetaConverseMode::covariant_mes);
  CHECK(m.value == doctest::Approx(0.5 * -std::log2(0.1875)).epsilon(1e-12));
  CHECK(m.value == doctest::Approx(1.2075).epsilon(1e-4));

  const auto dep = depolarizing_channel(1.0, reg("A"), reg("B"));
  for (double e : {0.1, 0.4, 0.8}) {
    const auto md = meta_converse_bound(dep, e, MetaConverseMode::covariant_mes);
    CHECK(md.value == doctest::Approx(0.5 * -std::log2(1 - e * e)).epsilon(1e-12));
    CHECK(meta_converse_bound(id, e, MetaConverseMode::covariant_mes).value >= 1.0 - 1e-12);
  }

  for (double p : {0.2, 0.5, 0.8}) {
    const auto ch = depolarizing_channel(p, reg("A"), reg("B"));
    double prev = -1e300;
    for (double e : {0.05, 0.2, 0.4, 0.6, 0.9}) {
      const double v = meta_converse_bound(ch, e, MetaConverseMode::covariant_mes).value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

}  // TEST_SUITE
