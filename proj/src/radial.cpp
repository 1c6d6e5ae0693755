#include "entdyn/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "entdyn/error.hpp"
#include "entdyn/parallel.hpp"

namespace entdyn::radial {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRefineWidth = 1e-10;
constexpr int kRefineCandidates = 5;

LogPolar on_circle(double r, double theta) { return {std::log(r), theta}; }

double log_abs_at(const FunctionSpec& spec, double r, double theta) {
  if (r < 1e100) return eval(spec, polar_exact(r, theta)).log_abs;
  return eval(spec, on_circle(r, theta)).log_abs;
}

void check_circle(double r, int n_samples) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::invalid_argument, "radius must be positive and finite");
  if (n_samples < 16) throw Error(Errc::invalid_argument, "n_samples must be >= 16");
}

// Uniform samples of log|f| on one circle.
struct CircleSamples {
  double r;
  int n;
  double dtheta;
  std::vector<double> log_abs;

  CircleSamples(const FunctionSpec& spec, double radius, int n_samples)
      : r(radius), n(n_samples), dtheta(kTwoPi / n_samples), log_abs(static_cast<std::size_t>(n_samples)) {
    for (int j = 0; j < n; ++j) log_abs[j] = log_abs_at(spec, r, theta(j));
  }

  [[nodiscard]] double theta(int j) const { return kTwoPi * j / n; }
  [[nodiscard]] double at(int j) const { return log_abs[static_cast<std::size_t>(((j % n) + n) % n)]; }
};

// Golden-section minimization of sign * log|f| on [a, b].
ModulusEstimate golden(const FunctionSpec& spec, double r, double a, double b, double sign) {
  constexpr double inv_phi = 0.6180339887498949;
  auto f = [&](double t) { return sign * log_abs_at(spec, r, t); };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > kRefineWidth) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ModulusEstimate{sign * fc, c} : ModulusEstimate{sign * fd, d};
}

// Refined extremum (sign = +1 for the minimum, -1 for the maximum).
ModulusEstimate refine_extremum(const FunctionSpec& spec, const CircleSamples& s, double sign) {
  std::vector<int> local;
  for (int j = 0; j < s.n; ++j) {
    const double v = sign * s.at(j);
    if (v <= sign * s.at(j - 1) && v <= sign * s.at(j + 1)) local.push_back(j);
  }
  if (local.empty()) local.push_back(0);
  std::stable_sort(local.begin(), local.end(), [&](int a, int b) { return sign * s.at(a) < sign * s.at(b); });
  if (local.size() > kRefineCandidates) local.resize(kRefineCandidates);

  ModulusEstimate best{s.at(local.front()), s.theta(local.front())};
  if (sign * best.log_modulus == -kInf) return best;  // exact zero (or overflow) on a sample
  for (int j : local) {
    const double t = s.theta(j);
    const ModulusEstimate e = golden(spec, s.r, t - s.dtheta, t + s.dtheta, sign);
    if (sign * e.log_modulus < sign * best.log_modulus) best = e;
  }
  best.theta = std::fmod(best.theta + kTwoPi, kTwoPi);
  return best;
}

// log(e^{la} * (1 - 2 dtheta r e^{ld - la})), or -inf when the bound is vacuous.
double log_inflated(double la, double ld, double dtheta, double r) {
  if (la == -kInf) return -kInf;
  const double factor = 1.0 - 2.0 * dtheta * r * std::exp(ld - la);
  if (!(factor > 0.0)) return -kInf;
  return la + std::log(factor);
}

}  // namespace

double ModulusEstimate::value() const { return std::exp(log_modulus); }

ModulusEstimate min_modulus(const FunctionSpec& spec, double r, int n_samples) {
  check_circle(r, n_samples);
  return refine_extremum(spec, CircleSamples(spec, r, n_samples), 1.0);
}

ModulusEstimate max_modulus(const FunctionSpec& spec, double r, int n_samples) {
  check_circle(r, n_samples);
  return refine_extremum(spec, CircleSamples(spec, r, n_samples), -1.0);
}

RadialScanRow certify_radius(const FunctionSpec& spec, double r, int n_samples) {
  check_circle(r, n_samples);
  const CircleSamples s(spec, r, n_samples);
  const ModulusEstimate lo = refine_extremum(spec, s, 1.0);
  const ModulusEstimate hi = refine_extremum(spec, s, -1.0);

  RadialScanRow row;
  row.r = r;
  row.m_est = lo.value();
  row.M_est = hi.value();
  row.theta_min = lo.theta;
  if (lo.log_modulus == -kInf) {
    row.m_lower = 0.0;
    row.certified = false;
    return row;
  }

  std::vector<double> stretch(static_cast<std::size_t>(s.n));
  for (int j = 0; j < s.n; ++j) {
    const double t = s.theta(j);
    stretch[j] = r < 1e100 ? log_stretch(spec, polar_exact(r, t)) : kInf;
  }
  auto stretch_at = [&](int j) { return stretch[static_cast<std::size_t>(((j % s.n) + s.n) % s.n)]; };

  double log_lower = kInf;
  for (int j = 0; j < s.n; ++j) {
    const double la = std::min(s.at(j), s.at(j + 1));
    const double ld = std::max(stretch_at(j), stretch_at(j + 1));
    log_lower = std::min(log_lower, log_inflated(la, ld, s.dtheta, r));
  }
  const int arc = static_cast<int>(std::floor(lo.theta / s.dtheta));
  const double ld_min_arc = std::max(stretch_at(arc), stretch_at(arc + 1));
  log_lower = std::min({log_lower, log_inflated(lo.log_modulus, ld_min_arc, s.dtheta, r), lo.log_modulus});

  row.m_lower = std::exp(log_lower);
  row.certified = row.m_lower > r;
  return row;
}

std::vector<double> log_uniform_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw Error(Errc::invalid_argument, "log-uniform grid needs 0 < lo < hi and at least two points");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<RadialScanRow> spl_certificate(const FunctionSpec& spec, double r_min, double r_max, int grid,
                                           int n_samples, unsigned threads) {
  const std::vector<double> radii = log_uniform_grid(r_min, r_max, grid);
  std::vector<RadialScanRow> rows(radii.size());
  parallel_for(
      radii.size(), [&](std::size_t i) { rows[i] = certify_radius(spec, radii[i], n_samples); }, threads);
  return rows;
}

std::vector<double> order_profile(const FunctionSpec& spec, const std::vector<double>& radii, int n_samples) {
  if (radii.size() < 3) throw Error(Errc::invalid_argument, "order estimate needs at least three radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > std::exp(1.0))) {
      throw Error(Errc::invalid_argument, fmt::format("radius {} <= e: log log undefined", radii[i]));
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(Errc::invalid_argument, "radii must increase");
  }
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const double log_m = max_modulus(spec, r, n_samples).log_modulus;
    out.push_back(log_m > 0.0 ? std::log(log_m) / std::log(r) : -kInf);
  }
  return out;
}

double order_estimate(const FunctionSpec& spec, const std::vector<double>& radii, int n_samples) {
  const auto p = order_profile(spec, radii, n_samples);
  return *std::max_element(p.begin(), p.end());
}

GrowthBest minmod_growth_check(const FunctionSpec& spec, int power, double r_max, int grid, int n_samples,
                               unsigned threads) {
  if (power < 0) throw Error(Errc::invalid_argument, "power must be >= 0");
  if (!(r_max > 0.0)) throw Error(Errc::invalid_argument, "r_max must be positive");
  const double r_lo = std::min(1.0, r_max / 10.0);
  const std::vector<double> radii = log_uniform_grid(r_lo, r_max, grid);
  auto log_ratio = [&](double r) { return min_modulus(spec, r, n_samples).log_modulus - power * std::log(r); };

  std::vector<double> values(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { values[i] = log_ratio(radii[i]); }, threads);
  const auto best_it = std::max_element(values.begin(), values.end());
  const auto best_i = static_cast<std::size_t>(best_it - values.begin());

  GrowthBest best{radii[best_i], 0.0, *best_it};
  // Golden-section refinement over log r between the neighbouring grid radii.
  double a = std::log(radii[best_i == 0 ? 0 : best_i - 1]);
  double b = std::log(radii[std::min(best_i + 1, radii.size() - 1)]);
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = log_ratio(std::exp(c));
  double fd = log_ratio(std::exp(d));
  while (b - a > 1e-9) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = log_ratio(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = log_ratio(std::exp(d));
    }
  }
  const double t = fc >= fd ? c : d;
  const double ft = std::max(fc, fd);
  if (ft > best.log_ratio_best) best = {std::exp(t), 0.0, ft};
  best.ratio_best = std::exp(best.log_ratio_best);
  return best;
}

void write_scan_csv(std::ostream& out, const std::vector<RadialScanRow>& rows) {
  fmt::print(out, "r,m_est,m_lower,M_est,theta_min,certified\n");
  for (const auto& row : rows) {
    fmt::print(out, "{},{},{},{},{},{}\n", row.r, row.m_est, row.m_lower, row.M_est, row.theta_min,
               row.certified ? 1 : 0);
  }
}

}  // namespace entdyn::radial
