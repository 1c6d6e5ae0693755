#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "entdyn/catalog.hpp"

namespace entdyn::contour {

struct TracePoint {
  double theta = 0.0;
  ComplexValue value;  // infinite components when log_abs > 709
  double log_abs = 0.0;
  double arg = 0.0;
};

/// Image of the circle |z| = radius, sampled at increasing theta from 0 to
/// 2 pi inclusive. Consecutive points differ by less than tol in argument
/// about the origin and in log-modulus.
struct CurveTrace {
  double radius = 0.0;
  double tol = 0.0;
  std::vector<TracePoint> points;
  bool closed = false;
};

inline constexpr std::size_t kMaxTracePoints = std::size_t{1} << 20;

/// Adaptive trace of theta -> f(theta) on [0, 2 pi]. Starts from 64 equal
/// intervals and bisects. Throws Error(refinement_cap_exceeded) past
/// kMaxTracePoints points or when an interval can no longer be split, which
/// signals a zero of f on or extremely near the curve.
CurveTrace trace_curve(const std::function<EvalResult(double)>& f, double radius, double tol);

CurveTrace trace_circle_image(const FunctionSpec& spec, double r, double tol = 0.1);

/// Branch-tracked winding of the trace about w. Throws Error(curve_too_close)
/// when the trace passes within 1e-12 max(1, |w|) of w and
/// Error(residual_too_large) when an argument step about w reaches pi/2 or
/// the total is more than 0.01 away from an integer.
int winding_number(const CurveTrace& trace, ComplexValue w);

struct SurroundResult {
  bool result = false;
  int winding = 0;
  double m_lower = 0.0;
};

/// f(|z| = r) surrounds the closed disc of radius r: the certified lower
/// bound on min |f| exceeds r and the winding about 0 is nonzero.
SurroundResult surrounds_disc(const FunctionSpec& spec, double r, int n_samples_min = 2048, double tol = 0.1);

/// Solutions of f(z) = w in |z| < r with multiplicity.
int count_preimages(const FunctionSpec& spec, double r, ComplexValue w, double tol = 0.1);

/// Columns theta,re,im,log_abs.
void write_trace_csv(std::ostream& out, const CurveTrace& trace);

}  // namespace entdyn::contour
