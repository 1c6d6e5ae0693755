#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entdyn/complex.hpp"
#include "entdyn/eval_result.hpp"
#include "entdyn/surgery.hpp"

namespace entdyn {

/// lambda * e^z.
struct LambdaExp {
  double lambda = 1.0;
};
/// Fatou's function z + 1 + e^{-z}.
struct Fatou {};
struct Sine {};
/// z^2 + c.
struct Quadratic {
  ComplexValue c;
};
/// Polynomial with coefficients in ascending order: c_0 + c_1 z + ... + c_d z^d.
struct MonomialPoly {
  std::vector<ComplexValue> coeffs;
};
/// prod_{n>=1} (1 + z/2^n)^2.
struct ProdPow2 {};
/// k prod_{n>=1} (1 + z/r_n)^2 with caller-supplied log r_n. Radii past the
/// supplied list continue with log-increments growing geometrically at the
/// ratio of the last two increments (constant increments when fewer than
/// three radii are given or the ratio is below 1).
struct BDProduct {
  double k = 1.0;
  std::vector<double> log_radii;
};
/// The quasiregular surgery map built on a ladder.
struct SurgeryG {
  std::shared_ptr<const surgery::SurgeryLadder> ladder;
};

using FunctionKind = std::variant<LambdaExp, Fatou, Sine, Quadratic, MonomialPoly, ProdPow2, BDProduct, SurgeryG>;

/// Catalog entry plus the relative tail tolerance used by infinite products.
struct FunctionSpec {
  FunctionKind kind;
  double truncation_tol = 1e-12;
  /// Canonical grammar string, e.g. "lambda-exp:0.3" or "prod2n".
  std::string name;

  [[nodiscard]] bool is_product() const;
  [[nodiscard]] bool is_analytic() const;
  /// Descriptive tags: "attracting-basin" (lambda-exp with 0 < lambda < 1/e),
  /// "totally-disconnected-K", "illustrative-constants", "quasiregular".
  [[nodiscard]] std::vector<std::string> tags() const;
};

/// Throws Error(invalid_spec) on a broken invariant.
void validate(const FunctionSpec& spec);

FunctionSpec make_lambda_exp(double lambda);
FunctionSpec make_fatou();
FunctionSpec make_sine();
FunctionSpec make_quadratic(ComplexValue c);
FunctionSpec make_poly(std::vector<ComplexValue> coeffs);
FunctionSpec make_prod_pow2(double truncation_tol = 1e-12);
/// Defaults: k = 1, log r_n = 3^n (illustrative, not the Baker-Dominguez function).
FunctionSpec make_bd_product(double k = 1.0, std::vector<double> log_radii = {3.0, 9.0, 27.0},
                             double truncation_tol = 1e-12);
FunctionSpec make_surgery(double gamma = 24.0, int levels = 8);

/// Parses the function-spec grammar:
///   lambda-exp:<real> | fatou | sine | quad:<complex> | poly:<c0>,<c1>,...
///   prod2n | bd[:k=<real>,logr=<l1>;<l2>;...] | surgery[:gamma=<real>,levels=<int>]
/// Any of these may carry ",tol=<real>" for the truncation tolerance of products.
/// Throws Error(invalid_spec).
FunctionSpec parse_function_spec(std::string_view text);

/// Parses "a+bi", "-2", "3i", "-i", "1e-3-2.5i", or "re,im"-free forms.
ComplexValue parse_complex(std::string_view text);

EvalResult eval(const FunctionSpec& spec, ComplexValue z);
/// Evaluation from log-polar input for moduli beyond the range of a double.
EvalResult eval(const FunctionSpec& spec, LogPolar z);

/// f'(z). Closed forms for analytic kinds; for products f * sum 2/(z + r_n).
/// For SurgeryG the complex derivative dg/dz is estimated by finite differences.
/// Throws Error(pole_of_log_derivative) at a zero of a product.
EvalResult eval_derivative(const FunctionSpec& spec, ComplexValue z);

/// log of the local stretch |df/dz| + |df/dz-bar| (|f'| for analytic kinds).
double log_stretch(const FunctionSpec& spec, ComplexValue z);

/// Smallest N such that the analytic log-tail bound of the product is below
/// truncation_tol on |z| <= radius, and |z| <= r_{N+1}/2 so that the bound
/// |log(1+w)| <= 2|w| applies. Product kinds only.
int truncation_index(const FunctionSpec& spec, double radius);

/// Analytic bound on |log tail| after N factors for |z| <= radius.
double tail_bound(const FunctionSpec& spec, double radius, int n_terms);

/// The N-term truncated product, as sum of logs (no tail estimate).
EvalResult eval_truncated(const FunctionSpec& spec, ComplexValue z, int n_terms);

/// log r_n for product kinds (n >= 1).
double product_log_radius(const FunctionSpec& spec, int n);

}  // namespace entdyn
