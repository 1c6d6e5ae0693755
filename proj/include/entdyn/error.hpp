#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entdyn {

enum class Errc {
  invalid_argument,
  invalid_spec,
  log_overflow,
  pole_of_log_derivative,
  refinement_cap_exceeded,
  curve_too_close,
  residual_too_large,
  gamma_too_small,
  out_of_ladder_range,
  degenerate_jacobian,
  io_failure,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace entdyn
