#include "entdyn/error.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#include "entdyn/parallel.hpp"

namespace entdyn {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
      return "invalid-argument";
    case Errc::invalid_spec:
      return "invalid-spec";
    case Errc::log_overflow:
      return "overflow-of-log";
    case Errc::pole_of_log_derivative:
      return "pole-of-log-derivative";
    case Errc::refinement_cap_exceeded:
      return "refinement-cap-exceeded";
    case Errc::curve_too_close:
      return "curve-too-close";
    case Errc::residual_too_large:
      return "residual-too-large";
    case Errc::gamma_too_small:
      return "gamma-too-small";
    case Errc::out_of_ladder_range:
      return "out-of-ladder-range";
    case Errc::degenerate_jacobian:
      return "degenerate-jacobian";
    case Errc::io_failure:
      return "io-failure";
  }
  return "unknown";
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
      // fall through to hardware concurrency
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace entdyn
