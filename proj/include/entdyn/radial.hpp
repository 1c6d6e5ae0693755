#pragma once

#include <iosfwd>
#include <vector>

#include "entdyn/catalog.hpp"

namespace entdyn::radial {

/// Extremum of |f| on a circle, kept as a logarithm so that e^r-sized moduli
/// stay representable.
struct ModulusEstimate {
  double log_modulus = 0.0;
  double theta = 0.0;

  [[nodiscard]] double value() const;
};

/// Coarse sampling at n_samples uniform angles, then golden-section
/// refinement (to angular width 1e-10) around the five smallest local
/// minima of the samples. The result is a sampled value, so it is an upper
/// bound on the true minimum.
ModulusEstimate min_modulus(const FunctionSpec& spec, double r, int n_samples = 2048);
ModulusEstimate max_modulus(const FunctionSpec& spec, double r, int n_samples = 2048);

/// One circle of a certificate scan. m_lower is a semi-rigorous lower bound
/// for min |f| on |z| = r: each coarse arc contributes
/// min(|f| at ends) - 2 dtheta r max(|f'| at ends), and the arc holding the
/// refined minimum contributes m_est - 2 dtheta r D with D the larger |f'|
/// at its ends. Not interval arithmetic.
struct RadialScanRow {
  double r = 0.0;
  double m_est = 0.0;
  double m_lower = 0.0;
  double M_est = 0.0;
  double theta_min = 0.0;
  bool certified = false;
};

RadialScanRow certify_radius(const FunctionSpec& spec, double r, int n_samples = 2048);

/// Certificate rows on `grid` log-uniform radii in [r_min, r_max], ordered by radius.
std::vector<RadialScanRow> spl_certificate(const FunctionSpec& spec, double r_min, double r_max, int grid,
                                           int n_samples = 2048, unsigned threads = 0);

/// log log M(r,f) / log r at each radius (radii increasing, all > e).
std::vector<double> order_profile(const FunctionSpec& spec, const std::vector<double>& radii,
                                  int n_samples = 2048);

/// Finite-radius surrogate of the order: the maximum of order_profile.
double order_estimate(const FunctionSpec& spec, const std::vector<double>& radii, int n_samples = 2048);

struct GrowthBest {
  double r_best = 0.0;
  double ratio_best = 0.0;
  double log_ratio_best = 0.0;
};

/// Scans log-uniform radii from min(1, r_max/10) to r_max and maximizes
/// m(r,f) / r^power, refining the best grid radius by golden section.
GrowthBest minmod_growth_check(const FunctionSpec& spec, int power, double r_max, int grid = 256,
                               int n_samples = 2048, unsigned threads = 0);

/// Columns r,m_est,m_lower,M_est,theta_min,certified.
void write_scan_csv(std::ostream& out, const std::vector<RadialScanRow>& rows);

/// Log-uniform grid with both end points exact.
std::vector<double> log_uniform_grid(double lo, double hi, int count);

}  // namespace entdyn::radial
