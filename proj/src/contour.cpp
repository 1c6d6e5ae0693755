#include "entdyn/contour.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "entdyn/error.hpp"
#include "entdyn/radial.hpp"

namespace entdyn::contour {

namespace {

constexpr int kInitialIntervals = 64;
constexpr double kCloseTol = 1e-9;
constexpr double kTooCloseRel = 1e-12;
constexpr double kResidualTol = 0.01;
// Beyond this gap in log-modulus, w is invisible next to f in double precision.
constexpr double kLogGapIgnoreW = 40.0;

TracePoint make_point(double theta, const EvalResult& r) {
  if (r.is_zero()) {
    throw Error(Errc::refinement_cap_exceeded, fmt::format("f vanishes on the curve at theta = {}", theta));
  }
  return {theta, r.value, r.log_abs, r.arg};
}

class Tracer {
 public:
  Tracer(const std::function<EvalResult(double)>& f, double tol, std::vector<TracePoint>& out)
      : f_(f), tol_(tol), out_(out) {}

  TracePoint at(double theta) const { return make_point(theta, f_(theta)); }

  void refine(const TracePoint& a, const TracePoint& b, int depth = 0) {
    if (fine(a, b)) {
      push(b);
      return;
    }
    const double mid = 0.5 * (a.theta + b.theta);
    if (!(mid > a.theta && mid < b.theta) || depth > 200) {
      throw Error(Errc::refinement_cap_exceeded,
                  fmt::format("cannot resolve the image near theta = {} (zero close to the curve)", a.theta));
    }
    const TracePoint m = at(mid);
    refine(a, m, depth + 1);
    refine(m, b, depth + 1);
  }

  void push(const TracePoint& p) {
    if (out_.size() >= kMaxTracePoints) {
      throw Error(Errc::refinement_cap_exceeded, fmt::format("trace exceeded {} points", kMaxTracePoints));
    }
    out_.push_back(p);
  }

 private:
  [[nodiscard]] bool fine(const TracePoint& a, const TracePoint& b) const {
    return std::abs(wrap_angle(b.arg - a.arg)) < tol_ && std::abs(b.log_abs - a.log_abs) < tol_;
  }

  const std::function<EvalResult(double)>& f_;
  double tol_;
  std::vector<TracePoint>& out_;
};

// log|value - w| and arg(value - w).
LogPolar relative_to(const TracePoint& p, ComplexValue w, double log_w) {
  if (w == ComplexValue{} || p.log_abs - log_w > kLogGapIgnoreW) return {p.log_abs, p.arg};
  return lp_add({p.log_abs, p.arg}, lp_neg(LogPolar::from_complex(w)));
}

}  // namespace

CurveTrace trace_curve(const std::function<EvalResult(double)>& f, double radius, double tol) {
  if (!(tol > 0.0 && tol < kPi / 2)) throw Error(Errc::invalid_argument, "tol must lie in (0, pi/2)");
  CurveTrace t;
  t.radius = radius;
  t.tol = tol;
  Tracer tracer(f, tol, t.points);
  TracePoint prev = tracer.at(0.0);
  tracer.push(prev);
  for (int i = 1; i <= kInitialIntervals; ++i) {
    const double theta = i == kInitialIntervals ? kTwoPi : kTwoPi * i / kInitialIntervals;
    const TracePoint next = tracer.at(theta);
    tracer.refine(prev, next);
    prev = next;
  }
  const TracePoint& first = t.points.front();
  const TracePoint& last = t.points.back();
  const double mismatch =
      std::abs(expm1_complex({last.log_abs - first.log_abs, wrap_angle(last.arg - first.arg)}));
  t.closed = mismatch <= kCloseTol;
  return t;
}

CurveTrace trace_circle_image(const FunctionSpec& spec, double r, double tol) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::invalid_argument, "radius must be positive and finite");
  const double log_r = std::log(r);
  auto f = [&](double theta) {
    if (r < 1e100) return eval(spec, polar_exact(r, theta));
    return eval(spec, LogPolar{log_r, theta});
  };
  return trace_curve(f, r, tol);
}

int winding_number(const CurveTrace& trace, ComplexValue w) {
  if (!trace.closed || trace.points.size() < 2) throw Error(Errc::invalid_argument, "trace is not closed");
  const double log_w = std::log(std::abs(w));
  const double log_threshold = std::log(kTooCloseRel * std::max(1.0, std::abs(w)));

  double total = 0.0;
  LogPolar prev = relative_to(trace.points.front(), w, log_w);
  if (prev.log_abs < log_threshold) throw Error(Errc::curve_too_close, "trace passes too close to the point");
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    const LogPolar cur = relative_to(trace.points[i], w, log_w);
    if (cur.log_abs < log_threshold) {
      throw Error(Errc::curve_too_close,
                  fmt::format("trace passes within {:.3g} of the point", std::exp(cur.log_abs)));
    }
    const double step = wrap_angle(cur.arg - prev.arg);
    if (std::abs(step) >= kPi / 2) {
      throw Error(Errc::residual_too_large,
                  fmt::format("argument step {:.3f} at theta = {}; refine the trace", step, trace.points[i].theta));
    }
    total += step;
    prev = cur;
  }
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= kResidualTol) {
    throw Error(Errc::residual_too_large, fmt::format("winding residual {:.3g}", std::abs(turns - rounded)));
  }
  return static_cast<int>(rounded);
}

SurroundResult surrounds_disc(const FunctionSpec& spec, double r, int n_samples_min, double tol) {
  const radial::RadialScanRow row = radial::certify_radius(spec, r, n_samples_min);
  SurroundResult s;
  s.m_lower = row.m_lower;
  s.winding = winding_number(trace_circle_image(spec, r, tol), {});
  s.result = row.m_lower > r && s.winding != 0;
  return s;
}

int count_preimages(const FunctionSpec& spec, double r, ComplexValue w, double tol) {
  if (w == ComplexValue{}) return winding_number(trace_circle_image(spec, r, tol), w);
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::invalid_argument, "radius must be positive and finite");
  // Trace f - w so that refinement is driven by the argument about w.
  const LogPolar minus_w = lp_neg(LogPolar::from_complex(w));
  const double log_r = std::log(r);
  auto f = [&](double theta) {
    const EvalResult v = r < 1e100 ? eval(spec, polar_exact(r, theta)) : eval(spec, LogPolar{log_r, theta});
    return EvalResult::from_log_polar(lp_add(v.log_polar(), minus_w));
  };
  const CurveTrace shifted = trace_curve(f, r, tol);
  const double log_threshold = std::log(kTooCloseRel * std::max(1.0, std::abs(w)));
  for (const auto& p : shifted.points) {
    if (p.log_abs < log_threshold) throw Error(Errc::curve_too_close, "trace passes too close to the point");
  }
  return winding_number(shifted, {});
}

void write_trace_csv(std::ostream& out, const CurveTrace& trace) {
  fmt::print(out, "theta,re,im,log_abs\n");
  for (const auto& p : trace.points) {
    fmt::print(out, "{},{},{},{}\n", p.theta, p.value.real(), p.value.imag(), p.log_abs);
  }
}

}  // namespace entdyn::contour
