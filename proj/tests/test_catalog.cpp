#include <doctest.h>

#include <cmath>
#include <random>

#include "entdyn/catalog.hpp"
#include "entdyn/error.hpp"

using namespace entdyn;

namespace {

// Frozen from a 30-digit evaluation of the 80-term product.
constexpr double kProdAt24 = 9728783.004;
constexpr double kProdAtMinus24 = 33.0956112;
constexpr double kProdAtMinus48 = 17507.578;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an entdyn::Error");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(eval(make_lambda_exp(0.3), ComplexValue{0, 0}).value == ComplexValue{0.3, 0});
  CHECK(eval(make_fatou(), ComplexValue{0, 0}).value == ComplexValue{2, 0});
  CHECK(eval(make_sine(), ComplexValue{0, 0}).value == ComplexValue{0, 0});
  CHECK(std::abs(eval(make_quadratic({-2, 0}), ComplexValue{1, 1}).value - ComplexValue{-2, 2}) < 1e-15);
  const auto cubic = make_poly({{1, 0}, {0, 0}, {0, 0}, {1, 0}});
  CHECK(std::abs(eval(cubic, ComplexValue{2, 0}).value - ComplexValue{9, 0}) < 1e-12);
}

TEST_CASE("product zero and lower bound on the positive axis") {
  const auto f = make_prod_pow2();
  const EvalResult z = eval(f, ComplexValue{-2, 0});
  CHECK(z.is_zero());
  CHECK(z.value == ComplexValue{});
  CHECK(eval(f, ComplexValue{2, 0}).value.real() >= 4.0);
  for (double x : {0.1, 1.0, 3.0, 10.0, 100.0}) {
    CHECK(eval(f, ComplexValue{x, 0}).value.real() >= (1 + x / 2) * (1 + x / 2));
  }
}

TEST_CASE("product values against high-precision oracle") {
  const auto f = make_prod_pow2();
  CHECK(eval(f, ComplexValue{24, 0}).value.real() == doctest::Approx(kProdAt24).epsilon(1e-9));
  CHECK(eval(f, ComplexValue{-24, 0}).value.real() == doctest::Approx(kProdAtMinus24).epsilon(1e-8));
  CHECK(eval(f, ComplexValue{-48, 0}).value.real() == doctest::Approx(kProdAtMinus48).epsilon(1e-7));
  CHECK(eval(f, ComplexValue{24, 0}).tail_bound <= 1e-12);
}

TEST_CASE("truncation index") {
  const auto f = make_prod_pow2();
  CHECK(truncation_index(f, 24.0) == 46);
  CHECK(truncation_index(f, 0.0) == 0);
  CHECK(tail_bound(f, 24.0, 46) < 1e-12);
  CHECK(tail_bound(f, 24.0, 45) >= 1e-12);

  const auto bd = make_bd_product(1.0, {3, 9, 27}, 1e-9);
  const int n = truncation_index(bd, 1.0);
  CHECK(n >= 1);
  CHECK(n < 10);
  CHECK(tail_bound(bd, 1.0, n) < 1e-9);
}

TEST_CASE("bd radii continue geometrically") {
  const auto bd = make_bd_product();
  CHECK(product_log_radius(bd, 1) == 3.0);
  CHECK(product_log_radius(bd, 3) == 27.0);
  CHECK(product_log_radius(bd, 4) == doctest::Approx(81.0));
  CHECK(product_log_radius(bd, 5) == doctest::Approx(243.0));
  const auto linear = make_bd_product(2.0, {1, 2});
  CHECK(product_log_radius(linear, 5) == doctest::Approx(5.0));
}

TEST_CASE("doubling the truncation index moves log_abs by less than twice the tolerance") {
  const auto f = make_prod_pow2();
  for (double r : {1.0, 5.0, 24.0, 300.0}) {
    for (double t : {0.0, 1.0, 2.5}) {
      const ComplexValue z = std::polar(r, t);
      const int n = truncation_index(f, r);
      const double a = eval_truncated(f, z, n).log_abs;
      const double b = eval_truncated(f, z, 2 * n).log_abs;
      CHECK(std::abs(a - b) < 2 * f.truncation_tol);
    }
  }
}

TEST_CASE("derivatives") {
  CHECK(std::abs(eval_derivative(make_lambda_exp(0.3), {0, 0}).value - ComplexValue{0.3, 0}) < 1e-15);
  CHECK(std::abs(eval_derivative(make_fatou(), {0, 0}).value) < 1e-15);
  CHECK(std::abs(eval_derivative(make_poly({{0, 0}, {0, 0}, {1, 0}}), {3, 0}).value - ComplexValue{6, 0}) < 1e-12);
  CHECK(code_of([] { eval_derivative(make_prod_pow2(), {-4, 0}); }) == Errc::pole_of_log_derivative);
}

TEST_CASE("log_abs is exact for lambda e^z") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-600, 600);
  const auto f = make_lambda_exp(0.3);
  for (int i = 0; i < 200; ++i) {
    const ComplexValue z{u(rng), u(rng)};
    CHECK(eval(f, z).log_abs == doctest::Approx(std::log(0.3) + z.real()).epsilon(1e-12));
  }
  const EvalResult huge = eval(f, ComplexValue{1e5, 0});
  CHECK(huge.overflowed);
  CHECK(huge.log_abs == doctest::Approx(1e5 + std::log(0.3)));
}

TEST_CASE("log-polar input agrees with Cartesian input") {
  for (const auto& f : {make_prod_pow2(), make_sine(), make_fatou(), make_poly({{1, 2}, {0, 0}, {3, 0}})}) {
    for (double t : {0.3, 1.7, -2.9}) {
      const ComplexValue z = std::polar(7.0, t);
      const EvalResult a = eval(f, z);
      const EvalResult b = eval(f, LogPolar::from_complex(z));
      CHECK(a.log_abs == doctest::Approx(b.log_abs).epsilon(1e-10));
      CHECK(std::abs(wrap_angle(a.arg - b.arg)) < 1e-9);
    }
  }
}

TEST_CASE("overflow is reported, not silent") {
  CHECK(code_of([] { eval(make_lambda_exp(1.0), LogPolar{800.0, 0.0}); }) == Errc::log_overflow);
  const EvalResult big = eval(make_prod_pow2(), LogPolar{200.0, 0.5});
  CHECK(std::isfinite(big.log_abs));
  CHECK(big.overflowed);
}

TEST_CASE("spec grammar") {
  CHECK(parse_function_spec("lambda-exp:0.3").name == "lambda-exp:0.3");
  CHECK(std::holds_alternative<Fatou>(parse_function_spec("fatou").kind));
  CHECK(std::holds_alternative<Sine>(parse_function_spec("sine").kind));
  CHECK(std::get<Quadratic>(parse_function_spec("quad:-2+0i").kind).c == ComplexValue{-2, 0});
  CHECK(std::holds_alternative<ProdPow2>(parse_function_spec("prod2n").kind));
  CHECK(parse_function_spec("prod2n:tol=1e-9").truncation_tol == 1e-9);
  const auto bd = parse_function_spec("bd:k=2,logr=1;2;4");
  CHECK(std::get<BDProduct>(bd.kind).log_radii == std::vector<double>{1, 2, 4});
  const auto g = parse_function_spec("surgery:gamma=24,levels=8");
  CHECK(std::get<SurgeryG>(g.kind).ladder->n_max == 8);
  CHECK(std::get<MonomialPoly>(parse_function_spec("poly:1,0,1").kind).coeffs.size() == 3);

  CHECK(code_of([] { parse_function_spec("nosuch"); }) == Errc::invalid_spec);
  CHECK(code_of([] { parse_function_spec("prod2n:color=3"); }) == Errc::invalid_spec);
  CHECK(code_of([] { parse_function_spec("bd:logr=3;2"); }) == Errc::invalid_spec);
  CHECK(code_of([] { parse_function_spec("surgery:gamma=2"); }) == Errc::invalid_spec);
  CHECK(code_of([] { parse_function_spec("prod2n:tol=0"); }) == Errc::invalid_spec);
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("-2") == ComplexValue{-2, 0});
  CHECK(parse_complex("3i") == ComplexValue{0, 3});
  CHECK(parse_complex("-i") == ComplexValue{0, -1});
  CHECK(parse_complex("1e-3-2.5i") == ComplexValue{1e-3, -2.5});
  CHECK(parse_complex("0.5+0.25i") == ComplexValue{0.5, 0.25});
}

TEST_CASE("tags") {
  auto has = [](const FunctionSpec& s, const std::string& t) {
    const auto tags = s.tags();
    return std::find(tags.begin(), tags.end(), t) != tags.end();
  };
  CHECK(has(make_lambda_exp(0.3), "attracting-basin"));
  CHECK_FALSE(has(make_lambda_exp(1.0), "attracting-basin"));
  CHECK(has(make_prod_pow2(), "totally-disconnected-K"));
  CHECK(has(make_fatou(), "totally-disconnected-K"));
  CHECK(has(make_bd_product(), "illustrative-constants"));
  CHECK(has(make_surgery(), "quasiregular"));
  CHECK_FALSE(make_surgery().is_analytic());
}
