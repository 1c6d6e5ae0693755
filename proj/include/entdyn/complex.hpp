#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace entdyn {

using ComplexValue = std::complex<double>;

/// A nonzero complex number stored as (log|z|, arg z). Used wherever moduli
/// run past the range of a double (surgery ladders, far orbit iterates).
/// log_abs == -inf encodes an exact zero.
struct LogPolar {
  double log_abs = 0.0;
  double arg = 0.0;

  static LogPolar from_complex(ComplexValue z) {
    if (z == ComplexValue{}) {
      return {-std::numeric_limits<double>::infinity(), 0.0};
    }
    return {std::log(std::abs(z)), std::arg(z)};
  }

  [[nodiscard]] bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }

  /// Cartesian form; components overflow to +-inf past ~e^709.
  [[nodiscard]] ComplexValue to_complex() const {
    if (is_zero()) return {};
    return std::polar(std::exp(log_abs), arg);
  }

  /// Complex logarithm with arg on the branch stored in this value.
  [[nodiscard]] ComplexValue log() const { return {log_abs, arg}; }
};

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// log(1 + w), accurate for small |w|. Returns -inf real part at w == -1.
/// r e^{i theta}, exact on the axes (theta = 0, pi/2, pi, 3pi/2, 2pi), so
/// that zeros lying on the real or imaginary axis are hit exactly.
inline ComplexValue polar_exact(double r, double theta) {
  if (theta == 0.0 || theta == kTwoPi) return {r, 0.0};
  if (theta == kPi || theta == -kPi) return {-r, 0.0};
  if (theta == kPi / 2) return {0.0, r};
  if (theta == 1.5 * kPi || theta == -kPi / 2) return {0.0, -r};
  return std::polar(r, theta);
}

inline ComplexValue log1p_complex(ComplexValue w) {
  const double a = w.real();
  const double b = w.imag();
  if (std::abs(w) < 0.5) {
    const double re = 0.5 * std::log1p(2.0 * a + a * a + b * b);
    return {re, std::atan2(b, 1.0 + a)};
  }
  const ComplexValue one_plus{1.0 + a, b};
  if (one_plus == ComplexValue{}) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  return std::log(one_plus);
}

/// exp(v) - 1 without cancellation for small |v|.
inline ComplexValue expm1_complex(ComplexValue v) {
  const double x = v.real();
  const double y = v.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

/// log(1 - e^v) for Re v <= 0, accurate when v is near 0 or when Re v is
/// very negative.
inline ComplexValue log_one_minus_exp(ComplexValue v) {
  if (v.real() < -1.0) {
    return log1p_complex(-std::exp(v));
  }
  const ComplexValue d = -expm1_complex(v);
  if (d == ComplexValue{}) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  return std::log(d);
}

/// a * b in log-polar form.
inline LogPolar lp_mul(LogPolar a, LogPolar b) {
  return {a.log_abs + b.log_abs, wrap_angle(a.arg + b.arg)};
}

/// a + b in log-polar form; factors out the larger term so that neither
/// operand needs to be representable as a double.
inline LogPolar lp_add(LogPolar a, LogPolar b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  if (b.log_abs > a.log_abs) std::swap(a, b);
  const ComplexValue ratio = std::exp(ComplexValue{b.log_abs - a.log_abs, b.arg - a.arg});
  const ComplexValue l = log1p_complex(ratio);
  if (std::isinf(l.real())) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  return {a.log_abs + l.real(), wrap_angle(a.arg + l.imag())};
}

inline LogPolar lp_neg(LogPolar a) { return {a.log_abs, wrap_angle(a.arg + kPi)}; }

}  // namespace entdyn
