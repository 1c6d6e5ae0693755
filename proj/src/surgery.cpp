#include "entdyn/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "entdyn/error.hpp"
#include "entdyn/parallel.hpp"

namespace entdyn::surgery {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxLevels = 20;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Positivity of log(P_{n+1}/T_n).
double positivity_margin(double gamma, int n) {
  return -2.0 * std::sqrt(gamma * factorial(n + 1)) + gamma * factorial(n) - 2.0 * std::sqrt(gamma * factorial(n));
}

// k log z + L, the common shape of every zone formula outside zone (i).
LogPolar combine(int k, LogPolar z, ComplexValue l) {
  return {k * z.log_abs + l.real(), wrap_angle(k * z.arg + l.imag())};
}

// Boundary function L_j(theta) = log(phi_j(r_j e^{i theta}) / (r_j e^{i theta})^k)
// for the two sides of an interpolation annulus.
struct SeamPair {
  int k;
  double s1;
  double s2;
};

SeamPair seam_pair(const SurgeryLadder& ld, const Zone& zone) {
  const int n = zone.level;
  if (zone.kind == ZoneKind::outer_interp) return {n + 1, ld.log_S[n], ld.log_T[n]};
  return {n + 1, ld.log_P[n + 1], ld.log_Q[n + 1]};
}

// Log of the shifted-zone factor for |z| >= R_n: log|b_n| + i pi + log(1 - R_n/z).
ComplexValue shifted_outer_log(const SurgeryLadder& ld, int n, LogPolar z) {
  return ComplexValue{ld.log_abs_b[n], kPi} + log_one_minus_exp({ld.log_R[n] - z.log_abs, -z.arg});
}

// For |z| < R_n: log(|b_n| R_n) + log(1 - z/R_n).
ComplexValue shifted_inner_log(const SurgeryLadder& ld, int n, LogPolar z) {
  return ComplexValue{ld.log_abs_b[n] + ld.log_R[n], 0.0} + log_one_minus_exp({z.log_abs - ld.log_R[n], z.arg});
}

ComplexValue boundary_inner(const SurgeryLadder& ld, const Zone& zone, double theta) {
  const int n = zone.level;
  if (zone.kind == ZoneKind::outer_interp) {
    if (n == 1) {
      // z^2 - 2 = z^2 (1 - 2/z^2) on |z| = S_1.
      return log_one_minus_exp({std::log(2.0) - 2.0 * ld.log_S[1], -2.0 * theta});
    }
    return shifted_outer_log(ld, n, {ld.log_S[n], theta});
  }
  return {ld.log_abs_a[n], 0.0};
}

ComplexValue boundary_outer(const SurgeryLadder& ld, const Zone& zone, double theta) {
  const int n = zone.level;
  if (zone.kind == ZoneKind::outer_interp) return {ld.log_abs_a[n], 0.0};
  return shifted_inner_log(ld, n + 1, {ld.log_Q[n + 1], theta});
}

// |dL/dtheta| of the boundary functions, analytic.
double boundary_inner_slope(const SurgeryLadder& ld, const Zone& zone, double theta) {
  const int n = zone.level;
  if (zone.kind == ZoneKind::outer_interp) {
    if (n == 1) {
      const ComplexValue e = std::exp(ComplexValue{std::log(2.0) - 2.0 * ld.log_S[1], -2.0 * theta});
      return 2.0 * std::abs(e / (1.0 - e));
    }
    const ComplexValue e = std::exp(ComplexValue{ld.log_R[n] - ld.log_S[n], -theta});
    return std::abs(e / (1.0 - e));
  }
  return 0.0;
}

double boundary_outer_slope(const SurgeryLadder& ld, const Zone& zone, double theta) {
  const int n = zone.level;
  if (zone.kind == ZoneKind::outer_interp) return 0.0;
  const ComplexValue e = std::exp(ComplexValue{ld.log_Q[n + 1] - ld.log_R[n + 1], theta});
  return std::abs(e / (1.0 - e));
}

EvalResult eval_quadratic(ComplexValue z) { return EvalResult::from_complex(z * z - 2.0); }

struct Seam {
  std::string name;
  double log_radius;
  Zone inner;
  Zone outer;
};

std::vector<Seam> seams(const SurgeryLadder& ld) {
  std::vector<Seam> out;
  for (int n = 1; n <= ld.n_max; ++n) {
    const Zone inner_s = n == 1 ? Zone{ZoneKind::quadratic, 0} : Zone{ZoneKind::shifted, n};
    out.push_back({fmt::format("S_{}", n), ld.log_S[n], inner_s, {ZoneKind::outer_interp, n}});
    out.push_back({fmt::format("T_{}", n), ld.log_T[n], {ZoneKind::outer_interp, n}, {ZoneKind::power, n}});
    if (n < ld.n_max) {
      out.push_back({fmt::format("P_{}", n + 1), ld.log_P[n + 1], {ZoneKind::power, n}, {ZoneKind::inner_interp, n}});
      out.push_back(
          {fmt::format("Q_{}", n + 1), ld.log_Q[n + 1], {ZoneKind::inner_interp, n}, {ZoneKind::shifted, n + 1}});
    }
  }
  return out;
}

// Golden-ratio sequence for deterministic, well-spread sample angles.
double spread_angle(std::size_t i) {
  constexpr double phi_frac = 0.6180339887498949;
  const double u = std::fmod(0.5 + phi_frac * static_cast<double>(i), 1.0);
  return wrap_angle(kTwoPi * u - kPi);
}

}  // namespace

double SurgeryLadder::gap(int n) const { return std::sqrt(gamma * factorial(n)); }

double feasibility_threshold() { return 12.0 + 8.0 * std::sqrt(2.0); }

LadderCheck verify_ladder(const SurgeryLadder& ld, double rel_tol) {
  LadderCheck c;
  auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  for (int n = 0; n <= ld.n_max; ++n) {
    c.recurrence_rel_err = std::max(c.recurrence_rel_err, rel(ld.log_R[n + 1] - ld.log_R[n], ld.gamma * factorial(n)));
  }
  c.ordered = true;
  c.signs_ok = true;
  for (int n = 1; n <= ld.n_max; ++n) {
    const double g = ld.gap(n);
    for (double width : {ld.log_T[n] - ld.log_S[n], ld.log_S[n] - ld.log_R[n], ld.log_R[n] - ld.log_Q[n],
                         ld.log_Q[n] - ld.log_P[n]}) {
      c.gap_rel_err = std::max(c.gap_rel_err, rel(width, g));
    }
    c.ordered = c.ordered && ld.log_P[n] < ld.log_Q[n] && ld.log_Q[n] < ld.log_R[n] && ld.log_R[n] < ld.log_S[n] &&
                ld.log_S[n] < ld.log_T[n];
    if (n < ld.n_max) c.ordered = c.ordered && ld.log_T[n] < ld.log_P[n + 1];
    c.signs_ok = c.signs_ok && ld.sign_b[n] == -1;
  }
  c.ok = c.ordered && c.signs_ok && c.recurrence_rel_err <= rel_tol && c.gap_rel_err <= rel_tol;
  return c;
}

SurgeryLadder build_ladder(double gamma, int n_max) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(Errc::invalid_argument, fmt::format("gamma must be positive, got {}", gamma));
  }
  if (n_max < 2 || n_max > kMaxLevels) {
    throw Error(Errc::invalid_argument, fmt::format("levels must lie in [2, {}], got {}", kMaxLevels, n_max));
  }
  for (int n = 1; n <= n_max; ++n) {
    const double margin = positivity_margin(gamma, n);
    if (!(margin > 0.0)) {
      throw Error(Errc::gamma_too_small,
                  fmt::format("gamma = {} fails the annulus ordering at n = {} (log(P_{}/T_{}) = {:.6g})", gamma, n,
                              n + 1, n, margin));
    }
  }

  SurgeryLadder ld;
  ld.gamma = gamma;
  ld.n_max = n_max;
  const auto size = static_cast<std::size_t>(n_max) + 2;
  ld.log_R.assign(size, kNaN);
  ld.log_P.assign(size, kNaN);
  ld.log_Q.assign(size, kNaN);
  ld.log_S.assign(size, kNaN);
  ld.log_T.assign(size, kNaN);
  ld.log_abs_a.assign(size, kNaN);
  ld.log_abs_b.assign(size, kNaN);
  ld.sign_b.assign(size, 0);

  // log R_{n+1} - log R_n = gamma n!, R_0 = 1; one extra level for a_{n_max}.
  ld.log_R[0] = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    ld.log_R[n + 1] = ld.log_R[n] + gamma * factorial(n);
  }
  for (int n = 1; n <= n_max; ++n) {
    const double g = ld.gap(n);
    ld.log_Q[n] = ld.log_R[n] - g;
    ld.log_P[n] = ld.log_R[n] - 2.0 * g;
    ld.log_S[n] = ld.log_R[n] + g;
    ld.log_T[n] = ld.log_R[n] + 2.0 * g;
    ld.log_abs_a[n] = -n * ld.log_R[n - 1];
    const double dn = n;
    ld.log_abs_b[n] =
        2.0 * std::log(dn + 1.0) - std::log(dn + 2.0) + dn * std::log((dn + 1.0) / dn) + ld.log_abs_a[n];
    ld.sign_b[n] = -1;
  }
  return ld;
}

std::string to_string(const Zone& zone) {
  switch (zone.kind) {
    case ZoneKind::quadratic:
      return "quadratic";
    case ZoneKind::power:
      return fmt::format("power[{}]", zone.level);
    case ZoneKind::shifted:
      return fmt::format("shifted[{}]", zone.level);
    case ZoneKind::outer_interp:
      return fmt::format("ann(S_{0},T_{0})", zone.level);
    case ZoneKind::inner_interp:
      return fmt::format("ann(P_{0},Q_{0})", zone.level + 1);
  }
  return "unknown";
}

int zone_degree(const Zone& zone) {
  switch (zone.kind) {
    case ZoneKind::quadratic:
      return 2;
    case ZoneKind::shifted:
      return zone.level;  // inside R_n; n + 1 outside
    default:
      return zone.level + 1;
  }
}

Zone locate(const SurgeryLadder& ld, double s) {
  if (std::isnan(s)) throw Error(Errc::invalid_argument, "NaN modulus");
  if (s <= ld.log_S[1]) return {ZoneKind::quadratic, 0};
  for (int n = 1; n <= ld.n_max; ++n) {
    if (s < ld.log_T[n]) return {ZoneKind::outer_interp, n};
    if (n == ld.n_max) {
      if (s == ld.log_T[n]) return {ZoneKind::power, n};
      break;
    }
    if (s <= ld.log_P[n + 1]) return {ZoneKind::power, n};
    if (s < ld.log_Q[n + 1]) return {ZoneKind::inner_interp, n};
    if (s <= ld.log_S[n + 1]) return {ZoneKind::shifted, n + 1};
  }
  throw Error(Errc::out_of_ladder_range,
              fmt::format("log|z| = {} lies beyond T_{} (log T = {})", s, ld.n_max, ld.log_T[ld.n_max]));
}

EvalResult eval_in_zone(const SurgeryLadder& ld, const Zone& zone, LogPolar z) {
  const int n = zone.level;
  switch (zone.kind) {
    case ZoneKind::quadratic:
      return eval_quadratic(z.to_complex());
    case ZoneKind::power:
      return EvalResult::from_log_polar(combine(n + 1, z, {ld.log_abs_a[n], 0.0}));
    case ZoneKind::shifted:
      if (z.log_abs >= ld.log_R[n]) {
        return EvalResult::from_log_polar(combine(n + 1, z, shifted_outer_log(ld, n, z)));
      }
      return EvalResult::from_log_polar(combine(n, z, shifted_inner_log(ld, n, z)));
    case ZoneKind::outer_interp:
    case ZoneKind::inner_interp: {
      // H(r e^{i theta}) = (r e^{i theta})^k exp((1-t) L_1(theta) + t L_2(theta)),
      // t = log(r/r_1) / log(r_2/r_1).
      const SeamPair p = seam_pair(ld, zone);
      const double t = (z.log_abs - p.s1) / (p.s2 - p.s1);
      const ComplexValue l = (1.0 - t) * boundary_inner(ld, zone, z.arg) + t * boundary_outer(ld, zone, z.arg);
      return EvalResult::from_log_polar(combine(p.k, z, l));
    }
  }
  throw std::logic_error("unhandled zone");
}

EvalResult eval_g(const SurgeryLadder& ld, ComplexValue z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(Errc::invalid_argument, "non-finite input to g");
  }
  if (std::abs(z) <= std::exp(ld.log_S[1])) return eval_quadratic(z);
  return eval_g(ld, LogPolar::from_complex(z));
}

EvalResult eval_g(const SurgeryLadder& ld, LogPolar z) {
  const Zone zone = locate(ld, z.log_abs);
  return eval_in_zone(ld, zone, {z.log_abs, wrap_angle(z.arg)});
}

LogWirtinger log_wirtinger(const SurgeryLadder& ld, LogPolar z, double h) {
  auto diff = [](const EvalResult& a, const EvalResult& b) {
    return ComplexValue{a.log_abs - b.log_abs, wrap_angle(a.arg - b.arg)};
  };
  const EvalResult sp = eval_g(ld, LogPolar{z.log_abs + h, z.arg});
  const EvalResult sm = eval_g(ld, LogPolar{z.log_abs - h, z.arg});
  const EvalResult tp = eval_g(ld, LogPolar{z.log_abs, z.arg + h});
  const EvalResult tm = eval_g(ld, LogPolar{z.log_abs, z.arg - h});
  const ComplexValue f_s = diff(sp, sm) / (2.0 * h);
  const ComplexValue f_t = diff(tp, tm) / (2.0 * h);
  const ComplexValue i{0.0, 1.0};
  return {eval_g(ld, z), 0.5 * (f_s - i * f_t), 0.5 * (f_s + i * f_t)};
}

InterpolationConstants check_constants(const SurgeryLadder& ld) {
  const double e4 = std::exp(4.0);
  InterpolationConstants c;
  c.k = 2;
  c.delta0 = 4.0 / e4;
  c.delta1 = 4.0 / (e4 - 2.0);
  const double log_ratio = ld.log_T[1] - ld.log_S[1];  // = sqrt(gamma)
  c.C = 1.0 - (1.0 / c.k) * (c.delta0 / log_ratio + c.delta1);
  if (!(c.C > 0.5)) {
    throw std::logic_error(fmt::format("interpolation constant C = {} <= 1/2 on a valid ladder", c.C));
  }
  return c;
}

AnnulusHypotheses measure_hypotheses(const SurgeryLadder& ld, const Zone& zone, int samples) {
  if (zone.kind != ZoneKind::outer_interp && zone.kind != ZoneKind::inner_interp) {
    throw Error(Errc::invalid_argument, "hypotheses are defined only on interpolation annuli");
  }
  const SeamPair p = seam_pair(ld, zone);
  AnnulusHypotheses h;
  h.zone = zone;
  h.k = p.k;
  h.log_width = p.s2 - p.s1;
  for (int j = 0; j < samples; ++j) {
    const double theta = -kPi + kTwoPi * (j + 1) / samples;
    const ComplexValue d = boundary_outer(ld, zone, theta) - boundary_inner(ld, zone, theta);
    h.sup_delta0 = std::max(h.sup_delta0, std::abs(d));
    h.sup_delta1 = std::max({h.sup_delta1, boundary_inner_slope(ld, zone, theta), boundary_outer_slope(ld, zone, theta)});
  }
  h.C = 1.0 - (h.sup_delta0 / h.log_width + h.sup_delta1) / h.k;
  h.dilatation_bound = h.C > 0.0 ? 1.0 / h.C : std::numeric_limits<double>::infinity();
  return h;
}

double verify_seams(const SurgeryLadder& ld, int samples_per_seam, unsigned threads) {
  if (samples_per_seam < 64) throw Error(Errc::invalid_argument, "samples_per_seam must be >= 64");
  const std::vector<Seam> all = seams(ld);
  std::vector<double> worst(all.size(), 0.0);
  parallel_for(
      all.size(),
      [&](std::size_t i) {
        const Seam& seam = all[i];
        double m = 0.0;
        for (int j = 0; j < samples_per_seam; ++j) {
          const double theta = wrap_angle(kTwoPi * j / samples_per_seam);
          const LogPolar z{seam.log_radius, theta};
          const EvalResult in = eval_in_zone(ld, seam.inner, z);
          const EvalResult out = eval_in_zone(ld, seam.outer, z);
          const ComplexValue delta{in.log_abs - out.log_abs, wrap_angle(in.arg - out.arg)};
          m = std::max(m, std::abs(expm1_complex(delta)));
        }
        worst[i] = m;
      },
      threads);
  return *std::max_element(worst.begin(), worst.end());
}

bool verify_annulus_chain(const SurgeryLadder& ld, int n, int samples, unsigned threads) {
  if (n < 1 || n > ld.n_max - 2) {
    throw Error(Errc::out_of_ladder_range,
                fmt::format("annulus chain needs 1 <= n <= {} (Q_(n+2) must exist), got {}", ld.n_max - 2, n));
  }
  if (samples < 1) throw Error(Errc::invalid_argument, "samples must be positive");
  const double lo = ld.log_S[n];
  const double hi = ld.log_Q[n + 1];
  const double target_lo = ld.log_S[n + 1];
  const double target_hi = ld.log_Q[n + 2];
  std::vector<char> ok(static_cast<std::size_t>(samples), 0);
  parallel_for(
      ok.size(),
      [&](std::size_t i) {
        const double u = (static_cast<double>(i) + 0.5) / samples;
        const LogPolar z{lo + u * (hi - lo), spread_angle(i)};
        const EvalResult g = eval_g(ld, z);
        ok[i] = g.log_abs > target_lo && g.log_abs < target_hi;
      },
      threads);
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

double dilatation_estimate(const SurgeryLadder& ld, LogPolar z, double h) {
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "step h must be positive");
  const Zone zone = locate(ld, z.log_abs);
  if (locate(ld, z.log_abs - h) != zone || locate(ld, z.log_abs + h) != zone) {
    throw Error(Errc::invalid_argument, fmt::format("point within h of a seam of {}", to_string(zone)));
  }
  const LogWirtinger w = log_wirtinger(ld, z, h);
  const double a = std::abs(w.d);
  const double b = std::abs(w.dbar);
  if (!(a > b)) {
    throw Error(Errc::degenerate_jacobian,
                fmt::format("|dg| = {} <= |dbar g| = {} at log|z| = {}, arg = {}", a, b, z.log_abs, z.arg));
  }
  return (a + b) / (a - b);
}

std::vector<Zone> interpolation_zones(const SurgeryLadder& ld) {
  std::vector<Zone> zones;
  for (int n = 1; n <= ld.n_max; ++n) {
    zones.push_back({ZoneKind::outer_interp, n});
    if (n < ld.n_max) zones.push_back({ZoneKind::inner_interp, n});
  }
  return zones;
}

DilatationSummary sweep_dilatation(const SurgeryLadder& ld, const Zone& zone, int points, double h, double slack,
                                   unsigned threads) {
  if (zone.kind != ZoneKind::outer_interp && zone.kind != ZoneKind::inner_interp) {
    throw Error(Errc::invalid_argument, "dilatation sweeps run over interpolation annuli");
  }
  if (points < 1) throw Error(Errc::invalid_argument, "points must be positive");
  const SeamPair p = seam_pair(ld, zone);
  const double margin = 4.0 * h;
  std::vector<double> k(static_cast<std::size_t>(points));
  parallel_for(
      k.size(),
      [&](std::size_t i) {
        const double u = (static_cast<double>(i) + 0.5) / points;
        const LogPolar z{p.s1 + margin + u * (p.s2 - p.s1 - 2.0 * margin), spread_angle(i)};
        k[i] = dilatation_estimate(ld, z, h);
      },
      threads);
  DilatationSummary s;
  s.zone = zone;
  s.points = points;
  s.k_max = *std::max_element(k.begin(), k.end());
  s.k_mean = std::accumulate(k.begin(), k.end(), 0.0) / points;
  const double n = zone.level;
  s.bound = 1.0 + 1.0 / (n * n) + slack;
  s.ok = s.k_max <= s.bound;
  return s;
}

}  // namespace entdyn::surgery
