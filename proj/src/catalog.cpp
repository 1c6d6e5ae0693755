#include "entdyn/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "entdyn/error.hpp"

namespace entdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
// Past this modulus polynomials and products switch to log-polar arithmetic.
constexpr double kLogPolarSwitch = 1e100;
constexpr int kMaxTerms = 1 << 20;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_real(double x) { return fmt::format("{}", x); }

std::string format_complex(ComplexValue c) {
  return fmt::format("{}{}{}i", c.real(), std::signbit(c.imag()) ? "-" : "+", std::abs(c.imag()));
}

// Checks a freshly computed result for a non-representable logarithm.
EvalResult checked(EvalResult r, std::string_view what) {
  if (std::isnan(r.log_abs) || r.log_abs == kInf || (r.log_abs == -kInf && r.value != ComplexValue{})) {
    throw Error(Errc::log_overflow, fmt::format("log|f| not representable while evaluating {}", what));
  }
  return r;
}

// ---- products -------------------------------------------------------------

bool is_pow2(const FunctionSpec& spec) { return std::holds_alternative<ProdPow2>(spec.kind); }

double log_k(const FunctionSpec& spec) {
  if (const auto* bd = std::get_if<BDProduct>(&spec.kind)) return std::log(bd->k);
  return 0.0;
}

double bd_log_radius(const BDProduct& bd, int n) {
  const auto& l = bd.log_radii;
  const int m = static_cast<int>(l.size());
  if (n <= m) return l[static_cast<std::size_t>(n - 1)];
  const double last = l[m - 1] - l[m - 2];
  double ratio = 1.0;
  if (m >= 3) ratio = std::max(1.0, last / (l[m - 2] - l[m - 3]));
  double value = l[m - 1];
  double step = last;
  for (int j = m + 1; j <= n; ++j) {
    step *= ratio;
    value += step;
    if (!std::isfinite(value)) return kInf;
  }
  return value;
}

// log of the bound 2 |z| sum_{n>N} 1/r_n on |log tail|.
double log_tail(const FunctionSpec& spec, double log_radius, int n_terms) {
  if (log_radius == -kInf) return -kInf;
  if (is_pow2(spec)) return log_radius + (1.0 - n_terms) * kLn2;
  const auto& bd = std::get<BDProduct>(spec.kind);
  const int m = static_cast<int>(bd.log_radii.size());
  const int explicit_end = std::max(n_terms, m);
  // Factor out e^{-l_{N+1}} to stay finite for huge radii.
  const double l_first = bd_log_radius(bd, n_terms + 1);
  if (l_first == kInf) return -kInf;
  double sum = 0.0;
  for (int n = n_terms + 1; n <= explicit_end; ++n) {
    sum += std::exp(l_first - bd_log_radius(bd, n));
  }
  const double step = bd.log_radii[m - 1] - bd.log_radii[m - 2];
  const double l_rest = bd_log_radius(bd, explicit_end + 1);
  if (l_rest != kInf) sum += std::exp(l_first - l_rest) / -std::expm1(-step);
  return std::log(2.0) + log_radius - l_first + std::log(sum);
}

int truncation_index_log(const FunctionSpec& spec, double log_radius) {
  const double log_tol = std::log(spec.truncation_tol);
  for (int n = 0; n < kMaxTerms; ++n) {
    const bool bound_applies = log_radius <= product_log_radius(spec, n + 1) - kLn2;
    if (bound_applies && log_tail(spec, log_radius, n) < log_tol) return n;
  }
  throw Error(Errc::invalid_argument, "product truncation index exceeds the term cap");
}

// 2 log(1 + z/r_n) for Cartesian z.
ComplexValue factor_log(const FunctionSpec& spec, int n, ComplexValue z) {
  const ComplexValue w = is_pow2(spec) ? ComplexValue{std::ldexp(z.real(), -n), std::ldexp(z.imag(), -n)}
                                       : z * std::exp(-product_log_radius(spec, n));
  return 2.0 * log1p_complex(w);
}

// 2 log(1 + z/r_n) for log-polar z.
ComplexValue factor_log(const FunctionSpec& spec, int n, LogPolar z) {
  const ComplexValue lw{z.log_abs - product_log_radius(spec, n), z.arg};
  if (lw.real() > 30.0) return 2.0 * (lw + log1p_complex(std::exp(-lw)));
  return 2.0 * log1p_complex(std::exp(lw));
}

template <typename Point>
EvalResult product_sum(const FunctionSpec& spec, Point z, int n_terms, double tail) {
  ComplexValue sum{log_k(spec), 0.0};
  for (int n = 1; n <= n_terms; ++n) {
    const ComplexValue l = factor_log(spec, n, z);
    if (l.real() == -kInf) return EvalResult::from_log_polar({-kInf, 0.0}, tail);
    sum += l;
  }
  return EvalResult::from_log_polar({sum.real(), sum.imag()}, tail);
}

EvalResult eval_product(const FunctionSpec& spec, ComplexValue z) {
  if (std::abs(z) >= kLogPolarSwitch) return eval(spec, LogPolar::from_complex(z));
  const double lr = z == ComplexValue{} ? -kInf : std::log(std::abs(z));
  const int n = truncation_index_log(spec, lr);
  return product_sum(spec, z, n, std::exp(log_tail(spec, lr, n)));
}

// ---- polynomials ----------------------------------------------------------

EvalResult eval_poly(const std::vector<ComplexValue>& c, LogPolar z) {
  LogPolar acc{-kInf, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = lp_add(acc.is_zero() ? acc : lp_mul(acc, z), LogPolar::from_complex(*it));
  }
  return EvalResult::from_log_polar(acc);
}

EvalResult eval_poly(const std::vector<ComplexValue>& c, ComplexValue z) {
  if (std::abs(z) < kLogPolarSwitch) {
    ComplexValue acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    if (std::isfinite(acc.real()) && std::isfinite(acc.imag())) return EvalResult::from_complex(acc);
  }
  return eval_poly(c, LogPolar::from_complex(z));
}

std::vector<ComplexValue> quadratic_coeffs(ComplexValue c) { return {c, 0.0, 1.0}; }

// ---- exponential-type kinds -----------------------------------------------

EvalResult eval_lambda_exp(double lambda, ComplexValue z) {
  EvalResult r;
  r.log_abs = std::log(std::abs(lambda)) + z.real();
  r.arg = wrap_angle(z.imag() + (lambda < 0.0 ? kPi : 0.0));
  if (r.log_abs > EvalResult::kMaxLogRepresentable) {
    r = EvalResult::from_log_polar({r.log_abs, r.arg});
  } else {
    r.value = lambda * std::exp(z);
  }
  return r;
}

// (e^{iz} + sign e^{-iz}) / 2 in log-polar form.
LogPolar half_exp_pair(ComplexValue z, double sign) {
  const LogPolar a{-z.imag(), z.real()};
  LogPolar b{z.imag(), -z.real()};
  if (sign < 0.0) b = lp_neg(b);
  LogPolar s = lp_add(a, b);
  s.log_abs -= kLn2;
  return s;
}

EvalResult eval_sine(ComplexValue z) {
  if (std::abs(z.imag()) < 20.0) return EvalResult::from_complex(std::sin(z));
  LogPolar s = half_exp_pair(z, -1.0);
  s.arg = wrap_angle(s.arg - 0.5 * kPi);  // divide by i
  return EvalResult::from_log_polar(s);
}

EvalResult eval_cosine(ComplexValue z) {
  if (std::abs(z.imag()) < 20.0) return EvalResult::from_complex(std::cos(z));
  return EvalResult::from_log_polar(half_exp_pair(z, 1.0));
}

EvalResult eval_fatou(ComplexValue z) {
  if (-z.real() < 700.0) return EvalResult::from_complex(z + 1.0 + std::exp(-z));
  const LogPolar sum = lp_add(lp_add(LogPolar::from_complex(z), {0.0, 0.0}), {-z.real(), -z.imag()});
  return EvalResult::from_log_polar(sum);
}

EvalResult eval_fatou_derivative(ComplexValue z) {
  if (-z.real() < 700.0) return EvalResult::from_complex(1.0 - std::exp(-z));
  return EvalResult::from_log_polar(lp_add({0.0, 0.0}, lp_neg({-z.real(), -z.imag()})));
}

// ---- surgery --------------------------------------------------------------

// Cartesian central differences in zone (i), log-coordinate differences elsewhere.
struct Wirtinger {
  EvalResult g;
  LogPolar d;     // dg/dz
  LogPolar dbar;  // dg/dz-bar
};

Wirtinger surgery_wirtinger(const surgery::SurgeryLadder& ld, ComplexValue z) {
  const double s1 = std::exp(ld.log_S[1]);
  if (std::abs(z) < 0.5 * s1) {
    const double h = 1e-6 * (1.0 + std::abs(z));
    const ComplexValue i{0.0, 1.0};
    const ComplexValue gx = (surgery::eval_g(ld, z + h).value - surgery::eval_g(ld, z - h).value) / (2.0 * h);
    const ComplexValue gy =
        (surgery::eval_g(ld, z + i * h).value - surgery::eval_g(ld, z - i * h).value) / (2.0 * h);
    return {surgery::eval_g(ld, z), LogPolar::from_complex(0.5 * (gx - i * gy)),
            LogPolar::from_complex(0.5 * (gx + i * gy))};
  }
  const LogPolar lz = LogPolar::from_complex(z);
  const auto w = surgery::log_wirtinger(ld, lz, 1e-6);
  // dg/dz = g (dF/dw) / z and dg/dz-bar = g (dF/dw-bar) / z-bar.
  const LogPolar d = lp_mul(w.g.log_polar(), lp_mul(LogPolar::from_complex(w.d), {-lz.log_abs, -lz.arg}));
  const LogPolar dbar = lp_mul(w.g.log_polar(), lp_mul(LogPolar::from_complex(w.dbar), {-lz.log_abs, lz.arg}));
  return {w.g, d, dbar};
}

// ---- grammar --------------------------------------------------------------

double parse_real(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(Errc::invalid_spec, fmt::format("bad {} '{}'", what, text));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

struct Args {
  std::vector<std::string_view> positional;
  std::vector<std::pair<std::string_view, std::string_view>> named;

  [[nodiscard]] const std::string_view* find(std::string_view key) const {
    for (const auto& [k, v] : named) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

Args parse_args(std::string_view text) {
  Args args;
  if (text.empty()) return args;
  for (std::string_view item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      args.positional.push_back(item);
    } else {
      args.named.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
  }
  return args;
}

void reject_unknown(const Args& args, std::initializer_list<std::string_view> allowed, std::string_view kind) {
  for (const auto& [k, v] : args.named) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw Error(Errc::invalid_spec, fmt::format("unknown parameter '{}' for {}", k, kind));
    }
  }
}

}  // namespace

// ---- FunctionSpec ---------------------------------------------------------

bool FunctionSpec::is_product() const {
  return std::holds_alternative<ProdPow2>(kind) || std::holds_alternative<BDProduct>(kind);
}

bool FunctionSpec::is_analytic() const { return !std::holds_alternative<SurgeryG>(kind); }

std::vector<std::string> FunctionSpec::tags() const {
  std::vector<std::string> t;
  if (const auto* e = std::get_if<LambdaExp>(&kind)) {
    if (e->lambda > 0.0 && e->lambda < std::exp(-1.0)) t.emplace_back("attracting-basin");
  }
  if (std::holds_alternative<Fatou>(kind) || is_product()) t.emplace_back("totally-disconnected-K");
  if (std::holds_alternative<BDProduct>(kind)) t.emplace_back("illustrative-constants");
  if (std::holds_alternative<SurgeryG>(kind)) t.emplace_back("quasiregular");
  return t;
}

void validate(const FunctionSpec& spec) {
  if (!(spec.truncation_tol > 0.0) || !std::isfinite(spec.truncation_tol)) {
    throw Error(Errc::invalid_spec, "truncation_tol must be positive");
  }
  std::visit(overloaded{
                 [](const LambdaExp& e) {
                   if (e.lambda == 0.0 || !std::isfinite(e.lambda)) {
                     throw Error(Errc::invalid_spec, "lambda must be finite and nonzero");
                   }
                 },
                 [](const Quadratic& q) {
                   if (!std::isfinite(q.c.real()) || !std::isfinite(q.c.imag())) {
                     throw Error(Errc::invalid_spec, "quadratic parameter must be finite");
                   }
                 },
                 [](const MonomialPoly& p) {
                   if (p.coeffs.empty()) throw Error(Errc::invalid_spec, "polynomial needs coefficients");
                   for (auto c : p.coeffs) {
                     if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                       throw Error(Errc::invalid_spec, "polynomial coefficients must be finite");
                     }
                   }
                 },
                 [](const BDProduct& bd) {
                   if (!(bd.k > 0.0) || !std::isfinite(bd.k)) throw Error(Errc::invalid_spec, "k must be positive");
                   if (bd.log_radii.size() < 2) {
                     throw Error(Errc::invalid_spec, "bd needs at least two log radii");
                   }
                   for (std::size_t i = 0; i < bd.log_radii.size(); ++i) {
                     if (!std::isfinite(bd.log_radii[i]) || (i > 0 && !(bd.log_radii[i] > bd.log_radii[i - 1]))) {
                       throw Error(Errc::invalid_spec, "log radii must be finite and strictly increasing");
                     }
                   }
                 },
                 [](const SurgeryG& g) {
                   if (!g.ladder) throw Error(Errc::invalid_spec, "surgery spec without ladder");
                 },
                 [](const auto&) {},
             },
             spec.kind);
}

FunctionSpec make_lambda_exp(double lambda) {
  FunctionSpec s{LambdaExp{lambda}, 1e-12, "lambda-exp:" + format_real(lambda)};
  validate(s);
  return s;
}

FunctionSpec make_fatou() { return {Fatou{}, 1e-12, "fatou"}; }

FunctionSpec make_sine() { return {Sine{}, 1e-12, "sine"}; }

FunctionSpec make_quadratic(ComplexValue c) {
  FunctionSpec s{Quadratic{c}, 1e-12, "quad:" + format_complex(c)};
  validate(s);
  return s;
}

FunctionSpec make_poly(std::vector<ComplexValue> coeffs) {
  std::string name = "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i > 0) name += ',';
    name += format_complex(coeffs[i]);
  }
  FunctionSpec s{MonomialPoly{std::move(coeffs)}, 1e-12, std::move(name)};
  validate(s);
  return s;
}

FunctionSpec make_prod_pow2(double truncation_tol) {
  std::string name = "prod2n";
  if (truncation_tol != 1e-12) name += ":tol=" + format_real(truncation_tol);
  FunctionSpec s{ProdPow2{}, truncation_tol, std::move(name)};
  validate(s);
  return s;
}

FunctionSpec make_bd_product(double k, std::vector<double> log_radii, double truncation_tol) {
  std::string name = "bd:k=" + format_real(k) + ",logr=";
  for (std::size_t i = 0; i < log_radii.size(); ++i) {
    if (i > 0) name += ';';
    name += format_real(log_radii[i]);
  }
  if (truncation_tol != 1e-12) name += ",tol=" + format_real(truncation_tol);
  FunctionSpec s{BDProduct{k, std::move(log_radii)}, truncation_tol, std::move(name)};
  validate(s);
  return s;
}

FunctionSpec make_surgery(double gamma, int levels) {
  auto ladder = std::make_shared<const surgery::SurgeryLadder>(surgery::build_ladder(gamma, levels));
  return {SurgeryG{std::move(ladder)}, 1e-12, fmt::format("surgery:gamma={},levels={}", gamma, levels)};
}

ComplexValue parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s += c;
  }
  if (s.empty()) throw Error(Errc::invalid_spec, "empty complex literal");
  if (s.back() != 'i') return {parse_real(s, "complex literal"), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_part = [](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, "imaginary part");
  };
  if (split_at == std::string::npos) return {0.0, imag_part(s)};
  return {parse_real(std::string_view(s).substr(0, split_at), "real part"),
          imag_part(std::string_view(s).substr(split_at))};
}

FunctionSpec parse_function_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const Args args = parse_args(colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));
  double tol = 1e-12;
  if (const auto* t = args.find("tol")) tol = parse_real(*t, "tol");

  FunctionSpec spec;
  if (head == "lambda-exp") {
    reject_unknown(args, {"tol"}, head);
    if (args.positional.size() != 1) throw Error(Errc::invalid_spec, "lambda-exp needs one parameter");
    spec = make_lambda_exp(parse_real(args.positional[0], "lambda"));
  } else if (head == "fatou" || head == "sine" || head == "prod2n") {
    reject_unknown(args, {"tol"}, head);
    if (!args.positional.empty()) throw Error(Errc::invalid_spec, fmt::format("{} takes no parameters", head));
    spec = head == "fatou" ? make_fatou() : head == "sine" ? make_sine() : make_prod_pow2(tol);
  } else if (head == "quad") {
    reject_unknown(args, {"tol"}, head);
    if (args.positional.size() != 1) throw Error(Errc::invalid_spec, "quad needs one complex parameter");
    spec = make_quadratic(parse_complex(args.positional[0]));
  } else if (head == "poly") {
    reject_unknown(args, {"tol"}, head);
    std::vector<ComplexValue> coeffs;
    for (auto p : args.positional) coeffs.push_back(parse_complex(p));
    spec = make_poly(std::move(coeffs));
  } else if (head == "bd") {
    reject_unknown(args, {"k", "logr", "tol"}, head);
    if (!args.positional.empty()) throw Error(Errc::invalid_spec, "bd takes only named parameters");
    double k = 1.0;
    std::vector<double> logr{3.0, 9.0, 27.0};
    if (const auto* v = args.find("k")) k = parse_real(*v, "k");
    if (const auto* v = args.find("logr")) {
      logr.clear();
      for (auto item : split(*v, ';')) logr.push_back(parse_real(item, "log radius"));
    }
    spec = make_bd_product(k, std::move(logr), tol);
  } else if (head == "surgery") {
    reject_unknown(args, {"gamma", "levels"}, head);
    if (!args.positional.empty()) throw Error(Errc::invalid_spec, "surgery takes only named parameters");
    double gamma = 24.0;
    int levels = 8;
    if (const auto* v = args.find("gamma")) gamma = parse_real(*v, "gamma");
    if (const auto* v = args.find("levels")) {
      const double l = parse_real(*v, "levels");
      if (l != std::floor(l)) throw Error(Errc::invalid_spec, "levels must be an integer");
      levels = static_cast<int>(l);
    }
    try {
      spec = make_surgery(gamma, levels);
    } catch (const Error& e) {
      throw Error(Errc::invalid_spec, e.what());
    }
  } else {
    throw Error(Errc::invalid_spec, fmt::format("unknown function '{}'", head));
  }
  if (spec.is_product()) {
    spec.truncation_tol = tol;
  } else if (args.find("tol") != nullptr) {
    spec.truncation_tol = tol;
  }
  validate(spec);
  return spec;
}

// ---- evaluation -----------------------------------------------------------

double product_log_radius(const FunctionSpec& spec, int n) {
  if (is_pow2(spec)) return n * kLn2;
  if (const auto* bd = std::get_if<BDProduct>(&spec.kind)) return bd_log_radius(*bd, n);
  throw Error(Errc::invalid_argument, "not a product kind");
}

double tail_bound(const FunctionSpec& spec, double radius, int n_terms) {
  if (!spec.is_product()) throw Error(Errc::invalid_argument, "tail bounds apply to product kinds only");
  if (radius < 0.0) throw Error(Errc::invalid_argument, "radius must be nonnegative");
  return std::exp(log_tail(spec, radius == 0.0 ? -kInf : std::log(radius), n_terms));
}

int truncation_index(const FunctionSpec& spec, double radius) {
  if (!spec.is_product()) throw Error(Errc::invalid_argument, "truncation_index applies to product kinds only");
  if (!(radius >= 0.0)) throw Error(Errc::invalid_argument, "radius must be nonnegative");
  return truncation_index_log(spec, radius == 0.0 ? -kInf : std::log(radius));
}

EvalResult eval_truncated(const FunctionSpec& spec, ComplexValue z, int n_terms) {
  if (!spec.is_product()) throw Error(Errc::invalid_argument, "eval_truncated applies to product kinds only");
  return product_sum(spec, z, n_terms, 0.0);
}

EvalResult eval(const FunctionSpec& spec, ComplexValue z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(Errc::invalid_argument, "evaluation point must be finite");
  }
  const EvalResult r = std::visit(
      overloaded{
          [&](const LambdaExp& e) { return eval_lambda_exp(e.lambda, z); },
          [&](const Fatou&) { return eval_fatou(z); },
          [&](const Sine&) { return eval_sine(z); },
          [&](const Quadratic& q) { return eval_poly(quadratic_coeffs(q.c), z); },
          [&](const MonomialPoly& p) { return eval_poly(p.coeffs, z); },
          [&](const ProdPow2&) { return eval_product(spec, z); },
          [&](const BDProduct&) { return eval_product(spec, z); },
          [&](const SurgeryG& g) { return surgery::eval_g(*g.ladder, z); },
      },
      spec.kind);
  return checked(r, spec.name);
}

EvalResult eval(const FunctionSpec& spec, LogPolar z) {
  if (std::isnan(z.log_abs) || z.log_abs == kInf || !std::isfinite(z.arg)) {
    throw Error(Errc::invalid_argument, "log-polar point must be finite");
  }
  if (z.is_zero()) return eval(spec, ComplexValue{});
  const EvalResult r = std::visit(
      overloaded{
          [&](const Quadratic& q) { return eval_poly(quadratic_coeffs(q.c), z); },
          [&](const MonomialPoly& p) { return eval_poly(p.coeffs, z); },
          [&](const ProdPow2&) {
            const int n = truncation_index_log(spec, z.log_abs);
            return product_sum(spec, z, n, std::exp(log_tail(spec, z.log_abs, n)));
          },
          [&](const BDProduct&) {
            const int n = truncation_index_log(spec, z.log_abs);
            return product_sum(spec, z, n, std::exp(log_tail(spec, z.log_abs, n)));
          },
          [&](const SurgeryG& g) { return surgery::eval_g(*g.ladder, z); },
          [&](const auto&) {
            // Exponential-type kinds need Re z itself, which must be a double.
            if (z.log_abs >= EvalResult::kMaxLogRepresentable) {
              throw Error(Errc::log_overflow, fmt::format("|z| = e^{} is beyond the range of {}", z.log_abs, spec.name));
            }
            return eval(spec, z.to_complex());
          },
      },
      spec.kind);
  return checked(r, spec.name);
}

EvalResult eval_derivative(const FunctionSpec& spec, ComplexValue z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(Errc::invalid_argument, "evaluation point must be finite");
  }
  auto poly_derivative = [&](const std::vector<ComplexValue>& c) {
    std::vector<ComplexValue> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    if (d.empty()) d.push_back(0.0);
    return eval_poly(d, z);
  };
  const EvalResult r = std::visit(
      overloaded{
          [&](const LambdaExp& e) { return eval_lambda_exp(e.lambda, z); },
          [&](const Fatou&) { return eval_fatou_derivative(z); },
          [&](const Sine&) { return eval_cosine(z); },
          [&](const Quadratic&) { return EvalResult::from_complex(2.0 * z); },
          [&](const MonomialPoly& p) { return poly_derivative(p.coeffs); },
          [&](const SurgeryG& g) {
            const Wirtinger w = surgery_wirtinger(*g.ladder, z);
            return EvalResult::from_log_polar(w.d);
          },
          [&](const auto&) {
            // f' = f * sum_n 2 / (z + r_n), each term written as (2/r_n) / (1 + z/r_n).
            const EvalResult f = eval_product(spec, z);
            const int n_terms = truncation_index(spec, std::abs(z));
            ComplexValue s{};
            for (int n = 1; n <= n_terms; ++n) {
              const double inv_r = is_pow2(spec) ? std::ldexp(1.0, -n) : std::exp(-product_log_radius(spec, n));
              const ComplexValue w = z * inv_r;
              const ComplexValue denom = 1.0 + w;
              if (denom == ComplexValue{}) {
                throw Error(Errc::pole_of_log_derivative, fmt::format("z coincides with the zero -r_{}", n));
              }
              s += 2.0 * inv_r / denom;
            }
            // |sum_{n>N} 2/(z + r_n)| <= 4 sum_{n>N} 1/r_n when |z| <= r_{N+1}/2.
            const double rest = 2.0 * std::exp(log_tail(spec, 0.0, n_terms));
            const double tail = f.tail_bound + (std::abs(s) > 0.0 ? rest / std::abs(s) : rest);
            return EvalResult::from_log_polar(lp_mul(f.log_polar(), LogPolar::from_complex(s)), tail);
          },
      },
      spec.kind);
  return checked(r, spec.name);
}

double log_stretch(const FunctionSpec& spec, ComplexValue z) {
  if (const auto* g = std::get_if<SurgeryG>(&spec.kind)) {
    const Wirtinger w = surgery_wirtinger(*g->ladder, z);
    return lp_add(w.d, {w.dbar.log_abs, w.d.arg}).log_abs;
  }
  return eval_derivative(spec, z).log_abs;
}

}  // namespace entdyn
