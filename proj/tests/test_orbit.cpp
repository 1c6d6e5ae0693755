#include <doctest.h>

#include <cmath>
#include <sstream>

#include "entdyn/error.hpp"
#include "entdyn/orbit.hpp"

using namespace entdyn;
using namespace entdyn::orbit;

namespace {
// Real fixed point of 0.3 e^x (principal branch), 40-digit evaluation.
constexpr double kFixedPoint = 0.48940222718;
// f(f(0)) for the Fatou function: 2 + 1 + e^{-2}.
constexpr double kFatouSecond = 3.135335283236613;
}  // namespace

TEST_CASE("classification examples") {
  const auto sq = make_poly({{0, 0}, {0, 0}, {1, 0}});
  CHECK(classify_orbit(sq, {0.5, 0}, {100, 4, 1e6}).status == Status::bounded);
  CHECK(classify_orbit(make_sine(), {0, 0}, {}).status == Status::bounded);
  CHECK(classify_orbit(make_lambda_exp(0.3), {0, 0}, {200, 2, 1e6}).status == Status::bounded);
}

TEST_CASE("Fatou orbit from 0 leaves the escape radius only with a long budget") {
  const auto f = make_fatou();
  // x_n grows by a little over 1 per step: x_100 is about 101, so 100 steps cannot reach 1e3.
  const OrbitVerdict short_run = classify_orbit(f, {0, 0}, {100, 50, 1e3});
  CHECK(short_run.status == Status::undetermined);
  CHECK(std::exp(short_run.max_log_abs) == doctest::Approx(101.2029).epsilon(1e-5));

  const OrbitVerdict long_run = classify_orbit(f, {0, 0}, {2000, 50, 1e3});
  CHECK(long_run.status == Status::escaped);
  REQUIRE(long_run.escape_iteration.has_value());
  CHECK(*long_run.escape_iteration == 999);
}

TEST_CASE("escape at iteration zero and overflow") {
  const OrbitVerdict v = classify_orbit(make_sine(), {1e9, 0}, {});
  CHECK(v.status == Status::escaped);
  CHECK(v.escape_iteration == 0);

  // e^1000 is already past any double escape radius.
  const OrbitVerdict w = classify_orbit(make_lambda_exp(1.0), {1000, 0}, {10, 1e3, 1e300});
  CHECK(w.status == Status::escaped);
}

TEST_CASE("attracting fixed point") {
  const auto t = orbit_trace(make_lambda_exp(0.3), {0, 0}, 200);
  CHECK(std::exp(t.iterates.back().log_abs) == doctest::Approx(kFixedPoint).epsilon(1e-10));
}

TEST_CASE("traces") {
  const auto sq = orbit_trace(make_poly({{0, 0}, {0, 0}, {1, 0}}), {2, 0}, 3);
  REQUIRE(sq.iterates.size() == 3);
  CHECK(std::exp(sq.iterates[0].log_abs) == doctest::Approx(4));
  CHECK(std::exp(sq.iterates[1].log_abs) == doctest::Approx(16));
  CHECK(std::exp(sq.iterates[2].log_abs) == doctest::Approx(256));

  const auto q = orbit_trace(make_quadratic({-2, 0}), {2, 0}, 5);
  for (const auto& p : q.iterates) {
    CHECK(p.to_complex() == ComplexValue{2, 0});
  }

  const auto fatou = orbit_trace(make_fatou(), {0, 0}, 2);
  CHECK(fatou.iterates[0].to_complex().real() == doctest::Approx(2.0));
  CHECK(fatou.iterates[1].to_complex().real() == doctest::Approx(kFatouSecond).epsilon(1e-14));

  const auto big = orbit_trace(make_lambda_exp(1.0), {10, 0}, 5);
  CHECK(big.log_overflow);
  CHECK(big.iterates.size() < 5);

  const auto g = orbit_trace(make_surgery(24, 4), {1e12, 0}, 10);
  CHECK(g.out_of_domain);
}

TEST_CASE("surgery iterates beyond double range stay in log-polar form") {
  const auto g = make_surgery(24, 8);
  // 30 > log S_1, inside ann(S_1, T_1): the orbit climbs the ladder.
  const OrbitVerdict v = classify_orbit(g, std::polar(std::exp(30.0), 0.4), {20, 1e3, 1e300});
  CHECK(v.status == Status::escaped);
  REQUIRE(v.escape_iteration.has_value());
  CHECK(*v.escape_iteration > 1);
  CHECK(v.max_log_abs > std::log(1e300));
}

TEST_CASE("budget validation") {
  CHECK_THROWS_AS(validate(OrbitBudget{0, 1, 2}), Error);
  CHECK_THROWS_AS(validate(OrbitBudget{10, 5, 5}), Error);
  CHECK_THROWS_AS(validate(OrbitBudget{10, -1, 5}), Error);
  CHECK_NOTHROW(validate(OrbitBudget{}));
}

TEST_CASE("batch order and CSV") {
  const auto f = make_quadratic({-1, 0});
  const std::vector<ComplexValue> seeds{{0, 0}, {3, 0}, {0.1, 0.1}, {-5, 2}};
  const auto batch = classify_batch(f, seeds, {}, 3);
  for (std::size_t i = 0; i < seeds.size(); ++i) CHECK(batch[i] == classify_orbit(f, seeds[i], {}));

  std::istringstream in("re,im\n0,0\n# comment\n\n3,0\r\n0.1,0.1\n-5,2\n");
  CHECK(read_seeds_csv(in) == seeds);
  std::istringstream bad("1;2\n");
  CHECK_THROWS_AS(read_seeds_csv(bad), Error);

  std::ostringstream out;
  write_verdicts_csv(out, seeds, batch);
  const std::string csv = out.str();
  CHECK(csv.rfind("re,im,status,iterations,escape_iteration,max_log_abs\n", 0) == 0);
  CHECK(csv.find("\n0,0,bounded,256,,") != std::string::npos);
  CHECK(csv.find("\n3,0,escaped,") != std::string::npos);
}
