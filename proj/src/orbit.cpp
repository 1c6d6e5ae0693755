#include "entdyn/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "entdyn/error.hpp"
#include "entdyn/parallel.hpp"

namespace entdyn::orbit {

namespace {

// Iterates above this modulus are carried in log-polar form only.
const double kLogPolarSwitch = std::log(1e100);

struct Point {
  ComplexValue z;
  LogPolar lp;
  bool cartesian = true;

  static Point from(const EvalResult& r) {
    Point p;
    p.lp = r.log_polar();
    p.cartesian = !r.overflowed && p.lp.log_abs < kLogPolarSwitch;
    p.z = p.cartesian ? r.value : ComplexValue{};
    return p;
  }
};

EvalResult step(const FunctionSpec& spec, const Point& p) {
  return p.cartesian ? eval(spec, p.z) : eval(spec, p.lp);
}

}  // namespace

void validate(const OrbitBudget& b) {
  if (b.max_iter < 1) throw Error(Errc::invalid_argument, "max_iter must be >= 1");
  if (!(b.bound_radius > 0.0) || !(b.bound_radius < b.escape_radius) || !std::isfinite(b.escape_radius)) {
    throw Error(Errc::invalid_argument, "budget needs 0 < bound_radius < escape_radius < inf");
  }
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::bounded:
      return "bounded";
    case Status::escaped:
      return "escaped";
    case Status::undetermined:
      return "undetermined";
  }
  return "unknown";
}

OrbitVerdict classify_orbit(const FunctionSpec& spec, ComplexValue z0, const OrbitBudget& budget) {
  validate(budget);
  const double log_bound = std::log(budget.bound_radius);
  const double log_escape = std::log(budget.escape_radius);

  Point p = Point::from(EvalResult::from_complex(z0));
  OrbitVerdict v;
  v.max_log_abs = p.lp.log_abs;
  if (p.lp.log_abs > log_escape) {
    v.status = Status::escaped;
    v.escape_iteration = 0;
    return v;
  }
  bool within_bound = p.lp.log_abs <= log_bound;
  for (int i = 1; i <= budget.max_iter; ++i) {
    EvalResult r;
    try {
      r = step(spec, p);
    } catch (const Error& e) {
      v.iterations_used = i;
      if (e.code() == Errc::log_overflow) {
        // |f^i(z0)| is past e^{DBL_MAX}, far beyond any double escape radius.
        v.status = Status::escaped;
        v.escape_iteration = i;
      } else {
        v.status = Status::undetermined;
      }
      return v;
    }
    p = Point::from(r);
    v.max_log_abs = std::max(v.max_log_abs, p.lp.log_abs);
    if (p.lp.log_abs > log_escape) {
      v.status = Status::escaped;
      v.iterations_used = i;
      v.escape_iteration = i;
      return v;
    }
    within_bound = within_bound && p.lp.log_abs <= log_bound;
  }
  v.iterations_used = budget.max_iter;
  v.status = within_bound ? Status::bounded : Status::undetermined;
  return v;
}

std::vector<OrbitVerdict> classify_batch(const FunctionSpec& spec, const std::vector<ComplexValue>& seeds,
                                         const OrbitBudget& budget, unsigned threads) {
  validate(budget);
  std::vector<OrbitVerdict> out(seeds.size());
  parallel_for(
      seeds.size(), [&](std::size_t i) { out[i] = classify_orbit(spec, seeds[i], budget); }, threads);
  return out;
}

OrbitTrace orbit_trace(const FunctionSpec& spec, ComplexValue z0, int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "trace length must be >= 1");
  OrbitTrace t;
  Point p = Point::from(EvalResult::from_complex(z0));
  for (int i = 0; i < n; ++i) {
    try {
      p = Point::from(step(spec, p));
    } catch (const Error& e) {
      if (e.code() == Errc::log_overflow) {
        t.log_overflow = true;
      } else if (e.code() == Errc::out_of_ladder_range) {
        t.out_of_domain = true;
      } else {
        throw;
      }
      break;
    }
    t.iterates.push_back(p.lp);
  }
  return t;
}

std::vector<ComplexValue> read_seeds_csv(std::istream& in) {
  std::vector<ComplexValue> seeds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line_no == 1 && line.rfind("re", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(Errc::invalid_argument, fmt::format("seed line {}: expected re,im", line_no));
    }
    try {
      std::size_t used_re = 0;
      std::size_t used_im = 0;
      const std::string re_text = line.substr(0, comma);
      const std::string im_text = line.substr(comma + 1);
      const double re = std::stod(re_text, &used_re);
      const double im = std::stod(im_text, &used_im);
      if (used_re != re_text.size() || used_im != im_text.size()) throw std::invalid_argument("trailing");
      seeds.emplace_back(re, im);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, fmt::format("seed line {}: cannot parse '{}'", line_no, line));
    }
  }
  return seeds;
}

void write_verdicts_csv(std::ostream& out, const std::vector<ComplexValue>& seeds,
                        const std::vector<OrbitVerdict>& verdicts) {
  fmt::print(out, "re,im,status,iterations,escape_iteration,max_log_abs\n");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& v = verdicts[i];
    fmt::print(out, "{},{},{},{},{},{}\n", seeds[i].real(), seeds[i].imag(), to_string(v.status), v.iterations_used,
               v.escape_iteration ? std::to_string(*v.escape_iteration) : std::string{}, v.max_log_abs);
  }
}

}  // namespace entdyn::orbit
