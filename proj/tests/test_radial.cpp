#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "entdyn/error.hpp"
#include "entdyn/radial.hpp"

using namespace entdyn;
using namespace entdyn::radial;

namespace {
// Dense 2^14-point sampling of the 80-term product on |z| = 24, 30 digits.
constexpr double kMinAt24 = 33.0956112;
constexpr double kMaxAt24 = 9728783.004;
constexpr double kRatioAt48 = 364.7412;
constexpr double kRatioAt100 = 553238.209;

FunctionSpec square() { return make_poly({{0, 0}, {0, 0}, {1, 0}}); }
}  // namespace

TEST_CASE("min and max modulus examples") {
  const auto e = make_lambda_exp(1.0);
  const ModulusEstimate m = min_modulus(e, 1.0);
  CHECK(m.value() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(m.theta == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(max_modulus(e, 2.0).value() == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  const ModulusEstimate z = min_modulus(make_prod_pow2(), 2.0);
  CHECK(z.value() == 0.0);
  CHECK(z.theta == doctest::Approx(kPi));

  CHECK(min_modulus(square(), 3.0).value() == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(max_modulus(square(), 3.0).value() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("product at r = 24") {
  const auto f = make_prod_pow2();
  const ModulusEstimate lo = min_modulus(f, 24.0);
  CHECK(lo.value() == doctest::Approx(kMinAt24).epsilon(1e-7));
  CHECK(lo.theta == doctest::Approx(kPi).epsilon(1e-8));
  CHECK(max_modulus(f, 24.0).value() == doctest::Approx(kMaxAt24).epsilon(1e-8));
}

TEST_CASE("bad circle arguments") {
  CHECK_THROWS_AS(min_modulus(square(), 0.0), Error);
  CHECK_THROWS_AS(min_modulus(square(), 1.0, 8), Error);
}

TEST_CASE("certificate rows") {
  const auto rows = spl_certificate(make_prod_pow2(), 20, 30, 50);
  REQUIRE(rows.size() == 50);
  int certified = 0;
  for (const auto& r : rows) {
    CHECK(0.0 <= r.m_lower);
    CHECK(r.m_lower <= r.m_est);
    CHECK(r.m_est <= r.M_est);
    if (r.certified) {
      CHECK(r.m_lower > r.r);
      ++certified;
    }
  }
  CHECK(certified >= 1);
  CHECK(rows.front().r == 20.0);
  CHECK(rows.back().r == 30.0);

  for (const auto& r : spl_certificate(make_lambda_exp(1.0), 1, 100, 50)) CHECK_FALSE(r.certified);
  for (const auto& r : spl_certificate(square(), 2, 10, 10)) CHECK(r.certified);
}

TEST_CASE("a zero on the circle is never certified") {
  const RadialScanRow row = certify_radius(make_prod_pow2(), 16.0);
  CHECK(row.m_est == 0.0);
  CHECK(row.m_lower == 0.0);
  CHECK_FALSE(row.certified);
}

TEST_CASE("polynomial extrema equal r^d |lead|") {
  const auto p = make_poly({{0, 0}, {0, 0}, {0, 0}, {2, 1}});
  for (double r : {0.5, 2.0, 7.0}) {
    const double want = std::pow(r, 3) * std::abs(ComplexValue{2, 1});
    CHECK(min_modulus(p, r).value() == doctest::Approx(want).epsilon(1e-9));
    CHECK(max_modulus(p, r).value() == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("refined minimum is below fresh random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0, kTwoPi);
  for (const auto& f : {make_prod_pow2(), make_fatou(), make_sine(), make_lambda_exp(0.3)}) {
    for (double r : {3.0, 24.0}) {
      const double m = min_modulus(f, r).log_modulus;
      for (int i = 0; i < 10000; ++i) {
        const double t = angle(rng);
        REQUIRE(m <= eval(f, std::polar(r, t)).log_abs + 1e-12);
      }
    }
  }
}

TEST_CASE("more samples never raise the estimate") {
  const auto f = make_prod_pow2();
  for (double r : {5.0, 24.0, 50.0}) {
    double prev = min_modulus(f, r, 64).log_modulus;
    for (int n : {128, 512, 2048, 8192}) {
      const double m = min_modulus(f, r, n).log_modulus;
      CHECK(m <= prev + 1e-12);
      prev = m;
    }
  }
}

TEST_CASE("certificates survive doubling the samples") {
  const auto f = make_prod_pow2();
  for (const auto& row : spl_certificate(f, 20, 30, 25, 1024)) {
    if (row.certified) CHECK(certify_radius(f, row.r, 2048).certified);
  }
}

TEST_CASE("order estimates") {
  const std::vector<double> radii{10, 100, 1000};
  CHECK(order_estimate(make_lambda_exp(1.0), radii) == doctest::Approx(1.0).epsilon(1e-12));
  const auto z2 = order_profile(square(), radii);
  CHECK(z2[0] > z2[1]);
  CHECK(z2[1] > z2[2]);
  CHECK(z2[0] == doctest::Approx(std::log(2 * std::log(10.0)) / std::log(10.0)));
  const auto prod = order_profile(make_prod_pow2(), radii);
  CHECK(prod[0] > prod[1]);
  CHECK(prod[1] > prod[2]);
  CHECK_THROWS_AS(order_estimate(square(), {2.0, 10, 100}), Error);
  CHECK_THROWS_AS(order_estimate(square(), {10, 100}), Error);
  CHECK_THROWS_AS(order_estimate(square(), {100, 10, 1000}), Error);
}

TEST_CASE("minimum-modulus growth") {
  const GrowthBest p = minmod_growth_check(make_prod_pow2(), 1, 100.0);
  CHECK(p.ratio_best >= 100);
  CHECK(p.r_best == doctest::Approx(100.0));
  CHECK(p.ratio_best == doctest::Approx(kRatioAt100).epsilon(1e-6));
  CHECK(min_modulus(make_prod_pow2(), 48.0).value() / 48.0 == doctest::Approx(kRatioAt48).epsilon(1e-5));

  const GrowthBest e = minmod_growth_check(make_lambda_exp(1.0), 0, 100.0);
  CHECK(e.r_best == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e.ratio_best == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

  const GrowthBest s = minmod_growth_check(square(), 1, 10.0);
  CHECK(s.r_best == doctest::Approx(10.0));
  CHECK(s.ratio_best == doctest::Approx(10.0));
}

TEST_CASE("scan CSV") {
  std::ostringstream out;
  write_scan_csv(out, spl_certificate(square(), 2, 4, 3));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,m_est,m_lower,M_est,theta_min,certified");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.back() == '1');
  }
  CHECK(rows == 3);
}

TEST_CASE("log-uniform grid") {
  const auto g = log_uniform_grid(1, 1000, 4);
  CHECK(g[0] == 1);
  CHECK(g[1] == doctest::Approx(10));
  CHECK(g[2] == doctest::Approx(100));
  CHECK(g[3] == 1000);
  CHECK_THROWS_AS(log_uniform_grid(2, 1, 4), Error);
}
