#include "doctest.h"

#include <cmath>
#include <sstream>

#include "oneshot/channel.hpp"
#include "oneshot/moddev.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("moddev") {

TEST_CASE("sequence classification") {
  const auto s = classify(ModerateSequence::power(1.0 / 3.0));
  CHECK(s.moderate);
  CHECK(s.strict);
  CHECK_FALSE(s.heuristic);

  std::vector<long long> n;
  std::vector<double> a;
  for (long long k = 16; k <= (1LL << 20); k *= 2) {
    n.push_back(k);
    a.push_back(std::sqrt(2.0 * std::log(static_cast<double>(k)) / static_cast<double>(k)));
  }
  const auto t = classify(ModerateSequence::table(n, a));
  CHECK(t.moderate);
  CHECK_FALSE(t.strict);
  CHECK(t.heuristic);

  CHECK_FALSE(classify(ModerateSequence::power(0.5)).moderate);

  for (int q = 2; q <= 12; ++q) {
    for (int p = 1; p < 2 * q; ++p) {
      const double alpha = static_cast<double>(p) / q;
      CHECK(classify(ModerateSequence::power(alpha)).moderate == (alpha < 0.5));
    }
  }
}

TEST_CASE("error parameter has no cancellation") {
  const auto seq = ModerateSequence::power(1.0 / 3.0);
  const auto e = seq.eps(1LL << 15);
  CHECK(e.eps == doctest::Approx(std::exp(-32.0)).epsilon(1e-12));
  CHECK(e.one_minus_eps == doctest::Approx(-std::expm1(-32.0)).epsilon(1e-15));
  const auto e2 = seq.eps(1);
  CHECK(e2.eps + e2.one_minus_eps == doctest::Approx(1.0));
}

TEST_CASE("error rescaling") {
  const auto seq = ModerateSequence::power(1.0 / 3.0);
  for (long long n : {10LL, 1000LL, 100000LL}) {
    const auto r = error_rescale(seq, {RescaleFactor::Kind::constant, 1.0}, n, 0.1);
    CHECK(r.b_n == doctest::Approx(r.a_n).epsilon(1e-15));
  }
  CHECK(error_rescale(seq, {RescaleFactor::Kind::constant, 4.0}, 1000000, 0.1).past_threshold);

  std::vector<long long> n;
  std::vector<double> a;
  for (long long k = 16; k <= (1LL << 20); k *= 2) {
    n.push_back(k);
    a.push_back(std::sqrt(2.0 * std::log(static_cast<double>(k)) / static_cast<double>(k)));
  }
  CHECK_THROWS_AS(error_rescale(ModerateSequence::table(n, a), {RescaleFactor::Kind::poly, 2.0}, 1 << 20, 0.1),
                  DomainError);
}

TEST_CASE("expansion values") {
  const auto seq = ModerateSequence::power(1.0 / 3.0);

  // Half of a Bell pair: rho_B = I/2 with trivial A, purified by R.
  ExpansionInputs bell_in;
  bell_in.state = mixed("B");
  bell_in.labels = {"B"};
  const auto ss = expansion_term(ExpansionTask::state_splitting, bell_in);
  for (long long n : {1LL, 100LL, 100000LL}) CHECK(expansion(ss, seq, n) == doctest::Approx(1.0).epsilon(1e-9));

  ExpansionInputs src;
  src.state = diag("B", {0.75, 0.25});
  const auto sl = expansion_term(ExpansionTask::source_low, src);
  CHECK(expansion(sl, seq, 1000) == doctest::Approx(0.9485399).epsilon(1e-7));

  ExpansionInputs ch;
  ChannelFunctionals zero;
  ch.channel = zero;
  const auto sim = expansion_term(ExpansionTask::channel_sim, ch);
  CHECK(expansion(sim, seq, 1000) == 0.0);
}

TEST_CASE("channel simulation needs a strictly moderate sequence") {
  ExpansionInputs ch;
  ch.channel = ChannelFunctionals{};
  const auto sim = expansion_term(ExpansionTask::channel_sim, ch);
  std::vector<long long> n;
  std::vector<double> a;
  for (long long k = 16; k <= (1LL << 20); k *= 2) {
    n.push_back(k);
    a.push_back(std::sqrt(2.0 * std::log(static_cast<double>(k)) / static_cast<double>(k)));
  }
  CHECK_THROWS_AS(expansion(sim, ModerateSequence::table(n, a), 1024), DomainError);
}

TEST_CASE("coding and simulation coefficients differ by sqrt 2") {
  ChannelFunctionals f;
  f.capacity_like = 0.7;
  f.vmax = 0.37;
  ExpansionInputs in;
  in.channel = f;
  const auto seq = ModerateSequence::power(0.25);
  const auto sim = expansion_term(ExpansionTask::channel_sim, in);
  const auto cod = expansion_term(ExpansionTask::channel_coding, in);
  for (long long n : {10LL, 1000LL}) {
    const double lhs = expansion(cod, seq, n);
    const double rhs = f.capacity_like + (expansion(sim, seq, n) - f.capacity_like) / std::sqrt(2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
  }
}

TEST_CASE("source and state-splitting coefficients agree on pure states") {
  ExpansionInputs src;
  src.state = diag("B", {0.6, 0.3, 0.1});
  const auto sl = expansion_term(ExpansionTask::source_low, src);
  ExpansionInputs ss;
  ss.state = diag("B", {0.6, 0.3, 0.1});
  ss.labels = {"B"};
  const auto st = expansion_term(ExpansionTask::state_splitting, ss);
  CHECK(sl.second_coeff == doctest::Approx(st.second_coeff).epsilon(1e-12));
}

TEST_CASE("residual curves") {
  const auto seq = ModerateSequence::power(1.0 / 3.0);
  ResidualInstance same;
  same.iid = {{0.3, 0.7}, {0.3, 0.7}, 1};
  ResidualOptions opt;
  opt.eta_abs = 1e-2;
  const auto flat = residual_curve(ResidualTask::dh_iid_low, same, seq, {64, 256, 1024}, opt);
  for (const auto& p : flat.points) {
    CHECK(p.computed == doctest::Approx(-std::log2(1 - p.eps_n) / p.n).epsilon(1e-9));
    CHECK(p.residual_over_an <= flat.slack);
  }
  CHECK(flat.n_star_index == 0);

  ResidualInstance inst;
  inst.iid = {{0.75, 0.25}, {0.5, 0.5}, 1};
  std::vector<long long> ns;
  for (int k = 4; k <= 14; ++k) ns.push_back(1LL << k);
  const auto low = residual_curve(ResidualTask::dh_iid_low, inst, seq, ns);
  for (std::size_t i = ns.size() - 4; i < ns.size(); ++i)
    CHECK(std::abs(low.points[i].residual_over_an) < std::abs(low.points[i - 1].residual_over_an));

  const auto high = residual_curve(ResidualTask::dh_iid_high, inst, seq, {256});
  const auto low1 = residual_curve(ResidualTask::dh_iid_low, inst, seq, {256});
  const double d = 0.75 * std::log2(1.5) + 0.25 * std::log2(0.5);
  CHECK(high.points[0].predicted > d);
  CHECK(low1.points[0].predicted < d);
  CHECK(high.points[0].predicted - d == doctest::Approx(d - low1.points[0].predicted).epsilon(1e-12));

  std::ostringstream os;
  write_residual_csv(os, low);
  CHECK(os.str().rfind("n,a_n,eps_n,computed,predicted,residual_over_an\n", 0) == 0);
}

}  // TEST_SUITE
