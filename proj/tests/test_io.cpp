#include "doctest.h"

#include "cli_util.hpp"
#include "oneshot/io.hpp"
#include "oneshot/random.hpp"
#include "oneshot/verify.hpp"
#include "support.hpp"

using namespace oneshot;
using namespace oneshot::test;

TEST_SUITE("cli") {

TEST_CASE("operator JSON round trip is bit-identical") {
  CounterRng rng(81);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_density(rng, RegisterShape({"A", "B"}, {2, 3}));
    const auto y = operator_from_json(operator_to_json(x));
    CHECK(y.shape() == x.shape());
    CHECK((y.matrix().array() == x.matrix().array()).all());
    CHECK(operator_to_json(y) == operator_to_json(x));
  }
}

TEST_CASE("channel JSON round trip is bit-identical") {
  CounterRng rng(82);
  const auto ch = random_channel(rng, reg("A", 2), reg("B", 3), 2);
  const auto back = channel_from_json(channel_to_json(ch));
  REQUIRE(back.kraus().size() == ch.kraus().size());
  for (std::size_t k = 0; k < ch.kraus().size(); ++k) CHECK((back.kraus()[k].array() == ch.kraus()[k].array()).all());
  CHECK(back.in_shape() == ch.in_shape());
  CHECK(back.out_shape() == ch.out_shape());
}

TEST_CASE("channel labels default when omitted") {
  const auto ch = channel_from_json(R"({"kraus":[[[1,0],[0,0],[0,0],[1,0]]],"in_dims":[2],"out_dims":[2]})");
  CHECK(ch.in_shape().labels() == std::vector<std::string>{"A1"});
  CHECK(ch.out_shape().labels() == std::vector<std::string>{"B1"});
}

TEST_CASE("malformed input is a parse error") {
  CHECK_THROWS_AS(operator_from_json("{"), ParseError);
  CHECK_THROWS_AS(operator_from_json(R"({"labels":["A"],"dims":[2]})"), ParseError);
  CHECK_THROWS_AS(operator_from_json(R"({"labels":["A"],"dims":[2],"entries":[[1,0]]})"), ParseError);
  CHECK_THROWS_AS(operator_from_json(R"({"labels":["A"],"dims":[0],"entries":[]})"), ParseError);
  CHECK_THROWS_AS(operator_from_json(R"({"labels":["A"],"dims":[2],"entries":[[0,0],[1,0],[0,0],[0,0]]})"),
                  ParseError);
  CHECK_THROWS_AS(channel_from_json(R"({"kraus":[[[0.5,0],[0,0],[0,0],[0.5,0]]],"in_dims":[2],"out_dims":[2]})"),
                  ParseError);
}

TEST_CASE("fixtures load") {
  const auto q = load_operator(std::string(ONESHOT_FIXTURE_DIR) + "/q34.json");
  CHECK(max_abs(q.matrix() - diag("B", {0.75, 0.25}).matrix()) == 0.0);
  const auto ch = load_channel(std::string(ONESHOT_FIXTURE_DIR) + "/identity_qubit.json");
  CHECK(ch.in_shape().total() == 2);
}

TEST_CASE("n range syntax") {
  using cli::parse_n_range;
  CHECK(parse_n_range("5") == std::vector<long long>{5});
  CHECK(parse_n_range("3..6") == std::vector<long long>{3, 4, 5, 6});
  CHECK(parse_n_range("10..20:5") == std::vector<long long>{10, 15, 20});
  CHECK(parse_n_range("16..128*2") == std::vector<long long>{16, 32, 64, 128});
  CHECK(parse_n_range("7,3,3..4") == std::vector<long long>{3, 4, 7});
  CHECK(parse_n_range("16..16384*2").size() == 11);
  CHECK_THROWS_AS(parse_n_range("a..b"), ParseError);
  CHECK_THROWS_AS(parse_n_range("9..3"), ParseError);
  CHECK_THROWS_AS(parse_n_range("1..3*1"), ParseError);
  CHECK_THROWS_AS(parse_n_range("1..10000000"), ParseError);
  CHECK_THROWS_AS(parse_n_range("0..3"), DomainError);
}

TEST_CASE("real parsing") {
  CHECK(cli::parse_real("0.25") == 0.25);
  CHECK(cli::parse_real("1/3") == 1.0 / 3.0);
  CHECK(cli::parse_real_list("0.1, 0.2") == std::vector<double>{0.1, 0.2});
  CHECK_THROWS_AS(cli::parse_real("x"), ParseError);
}

TEST_CASE("suite registry") {
  const auto names = suite_names();
  CHECK(names.size() == kSuites.size());
  for (const auto& s : kSuites) CHECK(has_suite(std::string(s.name)));
  CHECK_FALSE(has_suite("nope"));
}

}  // TEST_SUITE
