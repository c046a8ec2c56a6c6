#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "rankpromo/scenario.hpp"

using namespace rankpromo;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("empty input yields the default scenario") {
  auto cfg = parse("");
  CHECK(cfg.community.n == 10000);
  CHECK(cfg.community.u == 1000);
  CHECK(cfg.community.m == 100);
  CHECK(cfg.community.v_u == doctest::Approx(1000.0));
  CHECK(cfg.community.l == doctest::Approx(547.5));
  CHECK(cfg.community.quality_exponent == doctest::Approx(2.1));
  CHECK(cfg.community.q_max == doctest::Approx(0.4));
  CHECK(cfg.ranking.rule == PromotionRule::none);
  CHECK_FALSE(cfg.mixed.has_value());
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{1});
  CHECK(cfg.warmup() == 1095);
  CHECK(cfg.horizon() == 1095 + 1000);
}

TEST_CASE("all sections parse, with comments and blank lines") {
  auto cfg = parse(
      "# scenario\n"
      "[community]\n"
      "n = 1000\n"
      "u = 100\n"
      "m = 10\n"
      "v_u = 100\n"
      "l = 100\n"
      "\n"
      "[ranking]\n"
      "rule = selective\n"
      "k = 5\n"
      "r = 0.2\n"
      "[mixed]\n"
      "x = 0.5\n"
      "c = 0.1\n"
      "[run]\n"
      "horizon = 400\n"
      "warmup = 200\n"
      "seeds = 1,2,3\n");
  CHECK(cfg.community.n == 1000);
  CHECK(cfg.community.l == doctest::Approx(100.0));
  CHECK(cfg.ranking.rule == PromotionRule::selective);
  CHECK(cfg.ranking.k == 5);
  CHECK(cfg.ranking.r == doctest::Approx(0.2));
  REQUIRE(cfg.mixed.has_value());
  CHECK(cfg.mixed->x == doctest::Approx(0.5));
  CHECK(cfg.mixed->c == doctest::Approx(0.1));
  CHECK(cfg.horizon() == 400);
  CHECK(cfg.warmup() == 200);
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{1, 2, 3});
}

TEST_CASE("constraint violations are ConfigError") {
  CHECK_THROWS_AS(parse("[ranking]\nrule = uniform\nk = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[ranking]\nrule = uniform\nr = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[community]\nm = 2000\n"), ConfigError);  // m > u
  CHECK_THROWS_AS(parse("[mixed]\nx = -0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nhorizon = 100\nwarmup = 100\n"), ConfigError);
}

TEST_CASE("parse errors carry the offending line number") {
  try {
    parse("[community]\nn = 100\nnot a key value pair\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("unknown sections and keys are rejected") {
  CHECK_THROWS_AS(parse("[communty]\nn = 100\n"), ConfigError);
  CHECK_THROWS_AS(parse("[community]\npages = 100\n"), ConfigError);
  CHECK_THROWS_AS(parse("n = 100\n"), ConfigError);  // key before any section
  CHECK_THROWS_AS(parse("[ranking]\nrule = sometimes\n"), ConfigError);
}

TEST_CASE("sweep expands to one scenario per value") {
  auto cfg = parse(
      "[ranking]\n"
      "rule = selective\n"
      "[sweep]\n"
      "parameter = r\n"
      "values = 0, 0.05, 0.1, 0.2\n");
  auto scenarios = expand_sweep(cfg);
  REQUIRE(scenarios.size() == 4);
  CHECK(scenarios[0].ranking.r == doctest::Approx(0.0));
  CHECK(scenarios[3].ranking.r == doctest::Approx(0.2));
  for (const auto& s : scenarios) CHECK_FALSE(s.sweep.has_value());

  auto plain = parse("");
  CHECK(expand_sweep(plain).size() == 1);
}

TEST_CASE("sweep values are validated up front") {
  CHECK_THROWS_AS(parse("[sweep]\nparameter = r\nvalues = 0, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\nparameter = bogus\nvalues = 1\n"), ConfigError);
}

TEST_CASE("set_parameter reaches every tunable") {
  auto cfg = parse("[mixed]\nx = 0\n");
  set_parameter(cfg, "n", 500);
  set_parameter(cfg, "l", 100);
  set_parameter(cfg, "k", 3);
  set_parameter(cfg, "x", 0.25);
  CHECK(cfg.community.n == 500);
  CHECK(cfg.community.l == doctest::Approx(100.0));
  CHECK(cfg.ranking.k == 3);
  CHECK(cfg.mixed->x == doctest::Approx(0.25));
  CHECK_THROWS_AS(set_parameter(cfg, "bogus", 1.0), ConfigError);
}

TEST_CASE("scaling preserves the dimensionless ratios") {
  auto cfg = parse("");
  apply_scale(cfg, 0.1);
  CHECK(cfg.community.n == 1000);
  CHECK(cfg.community.u == 100);
  CHECK(cfg.community.m == 10);
  CHECK(cfg.community.v_u == doctest::Approx(100.0));
  CHECK(cfg.community.l == doctest::Approx(547.5));  // time scale untouched
  CHECK(static_cast<double>(cfg.community.u) / cfg.community.n == doctest::Approx(0.1));
  CHECK(static_cast<double>(cfg.community.m) / cfg.community.u == doctest::Approx(0.1));
  cfg.community.validate();
}

TEST_CASE("describe round-trips through the parser") {
  auto cfg = parse(
      "[community]\n"
      "n = 1000\n"
      "u = 100\n"
      "m = 10\n"
      "v_u = 50\n"
      "[ranking]\n"
      "rule = uniform\n"
      "k = 2\n"
      "r = 0.1\n"
      "[mixed]\n"
      "x = 0.3\n"
      "[run]\n"
      "horizon = 300\n"
      "warmup = 100\n"
      "seeds = 4,5\n");
  auto echoed = parse(describe(cfg));
  CHECK(echoed.community.n == cfg.community.n);
  CHECK(echoed.community.v_u == doctest::Approx(cfg.community.v_u));
  CHECK(echoed.ranking.rule == cfg.ranking.rule);
  CHECK(echoed.ranking.k == cfg.ranking.k);
  CHECK(echoed.ranking.r == doctest::Approx(cfg.ranking.r));
  REQUIRE(echoed.mixed.has_value());
  CHECK(echoed.mixed->x == doctest::Approx(0.3));
  CHECK(echoed.mixed->c == doctest::Approx(0.15));
  CHECK(echoed.horizon() == 300);
  CHECK(echoed.warmup() == 100);
  CHECK(echoed.run.seeds == cfg.run.seeds);
}
