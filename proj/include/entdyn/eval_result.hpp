#pragma once

#include <cmath>
#include <limits>

#include "entdyn/complex.hpp"

namespace entdyn {

/// Value of f at a point. `log_abs` and `arg` are always populated, even
/// when `value` would overflow a double (then `overflowed` is set and
/// `value` carries infinities). `log_abs == -inf` marks an exact zero.
struct EvalResult {
  ComplexValue value;
  double log_abs = 0.0;
  double arg = 0.0;
  double tail_bound = 0.0;
  bool overflowed = false;

  [[nodiscard]] LogPolar log_polar() const { return {log_abs, arg}; }
  [[nodiscard]] bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }

  // Above this log-modulus the Cartesian value is not representable.
  static constexpr double kMaxLogRepresentable = 709.0;

  static EvalResult from_complex(ComplexValue v, double tail = 0.0) {
    const LogPolar lp = LogPolar::from_complex(v);
    return {v, lp.log_abs, lp.arg, tail, false};
  }

  static EvalResult from_log_polar(LogPolar lp, double tail = 0.0) {
    EvalResult r;
    r.log_abs = lp.log_abs;
    r.arg = wrap_angle(lp.arg);
    r.tail_bound = tail;
    if (lp.is_zero()) {
      r.arg = 0.0;
      r.value = {};
    } else if (lp.log_abs > kMaxLogRepresentable) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      r.overflowed = true;
      r.value = {std::copysign(inf, std::cos(r.arg)), std::copysign(inf, std::sin(r.arg))};
    } else {
      r.value = std::polar(std::exp(lp.log_abs), r.arg);
    }
    return r;
  }
};

}  // namespace entdyn
