#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "entdyn/complex.hpp"
#include "entdyn/eval_result.hpp"

namespace entdyn::surgery {

/// Nested radius scales P_n < Q_n < R_n < S_n < T_n < P_{n+1}, carried as
/// natural logarithms. Vectors are indexed by level n; entry 0 only holds
/// R_0 = 1 (log 0) and is otherwise NaN.
struct SurgeryLadder {
  double gamma = 0.0;
  int n_max = 0;
  std::vector<double> log_R;
  std::vector<double> log_P;
  std::vector<double> log_Q;
  std::vector<double> log_S;
  std::vector<double> log_T;
  /// log a_n, where a_n = R_{n+1} / R_n^{n+1} = 1 / R_{n-1}^n > 0.
  std::vector<double> log_abs_a;
  /// log |b_n|; b_n = -((n+1)^2/(n+2)) ((n+1)/n)^n a_n.
  std::vector<double> log_abs_b;
  std::vector<int> sign_b;

  /// sqrt(gamma * n!), the common log-width of the four sub-annuli at level n.
  [[nodiscard]] double gap(int n) const;
};

/// Builds the ladder entirely in log space. Throws Error(gamma_too_small)
/// when -2 sqrt(gamma (n+1)!) + gamma n! - 2 sqrt(gamma n!) <= 0 for some
/// n <= n_max, and Error(invalid_argument) for gamma <= 0 or n_max outside
/// [2, 20].
SurgeryLadder build_ladder(double gamma, int n_max);

struct LadderCheck {
  double recurrence_rel_err = 0.0;  // max |log(R_{n+1}/R_n) - gamma n!| / (gamma n!)
  double gap_rel_err = 0.0;         // max deviation of the four sub-annulus widths from sqrt(gamma n!)
  bool ordered = false;             // P_n < Q_n < R_n < S_n < T_n < P_{n+1}
  bool signs_ok = false;            // sign b_n = -1
  bool ok = false;
};

LadderCheck verify_ladder(const SurgeryLadder& ladder, double rel_tol = 1e-12);

/// Smallest gamma passing the positivity condition at n = 1: 12 + 8 sqrt 2.
double feasibility_threshold();

enum class ZoneKind {
  quadratic,     // |z| <= S_1 : z^2 - 2
  power,         // T_n <= |z| <= P_{n+1} : a_n z^{n+1}
  shifted,       // Q_n <= |z| <= S_n, n >= 2 : b_n (z - R_n) z^n
  outer_interp,  // S_n < |z| < T_n
  inner_interp,  // P_{n+1} < |z| < Q_{n+1}
};

struct Zone {
  ZoneKind kind = ZoneKind::quadratic;
  int level = 0;

  friend bool operator==(const Zone&, const Zone&) = default;
};

std::string to_string(const Zone& zone);

/// Circle degree of the map in this zone (the k of the interpolation).
int zone_degree(const Zone& zone);

/// Zone containing |z| = e^log_abs. Throws Error(out_of_ladder_range) past T_{n_max}.
Zone locate(const SurgeryLadder& ladder, double log_abs);

/// Evaluates the formula of `zone` at z without checking that z lies in it.
/// Used for one-sided limits on seam circles.
EvalResult eval_in_zone(const SurgeryLadder& ladder, const Zone& zone, LogPolar z);

/// The quasiregular map g. Zone (i) is computed in Cartesian form so that
/// real inputs stay exactly real; everything outside it in log-polar form.
EvalResult eval_g(const SurgeryLadder& ladder, ComplexValue z);
EvalResult eval_g(const SurgeryLadder& ladder, LogPolar z);

/// Wirtinger derivatives of F(w) = log g(e^w) by central differences in
/// (log|z|, arg z). Dilatation is invariant under the two logarithms.
struct LogWirtinger {
  EvalResult g;
  ComplexValue d;     // dF/dw
  ComplexValue dbar;  // dF/dw-bar
};
LogWirtinger log_wirtinger(const SurgeryLadder& ladder, LogPolar z, double h);

struct InterpolationConstants {
  double delta0 = 0.0;
  double delta1 = 0.0;
  double C = 0.0;
  int k = 0;
};

/// Constants for the S_1-T_1 interpolation: delta0 = 4/e^4,
/// delta1 = 4/(e^4 - 2), k = 2, log(r2/r1) = sqrt(gamma). Throws
/// std::logic_error if C <= 1/2.
InterpolationConstants check_constants(const SurgeryLadder& ladder);

/// Measured interpolation hypotheses for one interpolation annulus: the
/// supremum over the seam angle of |L_2 - L_1| and of |dL_j/dtheta|, and
/// the resulting C and dilatation bound 1/C.
struct AnnulusHypotheses {
  Zone zone;
  int k = 0;
  double log_width = 0.0;
  double sup_delta0 = 0.0;
  double sup_delta1 = 0.0;
  double C = 0.0;
  double dilatation_bound = 0.0;
};
AnnulusHypotheses measure_hypotheses(const SurgeryLadder& ladder, const Zone& zone, int samples);

/// Max over all seam circles (S_n, T_n, P_n, Q_n) of |g- - g+| / |g+|, with
/// both one-sided formulas evaluated exactly on the seam.
double verify_seams(const SurgeryLadder& ladder, int samples_per_seam, unsigned threads = 0);

/// Property (v) on level n: every sample of ann(S_n, Q_{n+1}) maps into
/// ann(S_{n+1}, Q_{n+2}). Requires 1 <= n <= n_max - 2.
bool verify_annulus_chain(const SurgeryLadder& ladder, int n, int samples, unsigned threads = 0);

/// Finite-difference dilatation K = (|dg| + |dbar g|) / (|dg| - |dbar g|).
double dilatation_estimate(const SurgeryLadder& ladder, LogPolar z, double h);

struct DilatationSummary {
  Zone zone;
  int points = 0;
  double k_max = 0.0;
  double k_mean = 0.0;
  double bound = 0.0;  // allowed maximum: K_n + finite-difference slack
  bool ok = false;
};

/// Interior sweep of one interpolation annulus; the allowed maximum is
/// K_n + slack with K_n = 1 + 1/n^2 (K_1 = 2).
DilatationSummary sweep_dilatation(const SurgeryLadder& ladder, const Zone& zone, int points, double h,
                                   double slack, unsigned threads = 0);

/// All interpolation annuli of the ladder, innermost first.
std::vector<Zone> interpolation_zones(const SurgeryLadder& ladder);

}  // namespace entdyn::surgery
