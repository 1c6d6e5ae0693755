#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "entdyn/catalog.hpp"

namespace entdyn::orbit {

/// Finite-budget surrogate for "the orbit is bounded". An orbit that stays
/// within bound_radius for max_iter steps is Bounded; one whose modulus
/// passes escape_radius is Escaped (it left the budgeted region, which is
/// not a proof of membership in the escaping set).
struct OrbitBudget {
  int max_iter = 256;
  double bound_radius = 1e3;
  double escape_radius = 1e8;
};

void validate(const OrbitBudget& budget);

enum class Status { bounded, escaped, undetermined };

std::string_view to_string(Status s);

struct OrbitVerdict {
  Status status = Status::undetermined;
  int iterations_used = 0;
  double max_log_abs = 0.0;
  std::optional<int> escape_iteration;

  friend bool operator==(const OrbitVerdict&, const OrbitVerdict&) = default;
};

/// Iterates from z0. The seed itself counts as iterate 0. Moduli above 1e100
/// are carried in log-polar form.
OrbitVerdict classify_orbit(const FunctionSpec& spec, ComplexValue z0, const OrbitBudget& budget);

/// Classifies many seeds in parallel; results are in input order.
std::vector<OrbitVerdict> classify_batch(const FunctionSpec& spec, const std::vector<ComplexValue>& seeds,
                                         const OrbitBudget& budget, unsigned threads = 0);

struct OrbitTrace {
  std::vector<LogPolar> iterates;  // f(z0), f^2(z0), ...
  bool log_overflow = false;       // stopped early: log|f^k| left the double range
  bool out_of_domain = false;      // stopped early: outside the domain of f
};

OrbitTrace orbit_trace(const FunctionSpec& spec, ComplexValue z0, int n);

/// Reads "re,im" lines; blank lines and lines starting with '#' are skipped,
/// as is a leading "re,im" header.
std::vector<ComplexValue> read_seeds_csv(std::istream& in);
void write_verdicts_csv(std::ostream& out, const std::vector<ComplexValue>& seeds,
                        const std::vector<OrbitVerdict>& verdicts);

}  // namespace entdyn::orbit
