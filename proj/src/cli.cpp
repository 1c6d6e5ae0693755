#include "entdyn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "entdyn/catalog.hpp"
#include "entdyn/contour.hpp"
#include "entdyn/defaults.hpp"
#include "entdyn/error.hpp"
#include "entdyn/orbit.hpp"
#include "entdyn/radial.hpp"
#include "entdyn/raster.hpp"
#include "entdyn/surgery.hpp"

namespace entdyn::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kEscapedNote =
    "escaped means the orbit left the budgeted region |z| <= escape_radius within max_iter steps; "
    "it is not a proof that the point tends to infinity";
constexpr const char* kComponentsNote =
    "component counts are pixel-scale and illustrative; they cannot resolve the topology of the bounded-orbit set";
constexpr const char* kDisconnectedNote =
    "the bounded-orbit set of this function is known to be totally disconnected; no finite raster can show this";
constexpr const char* kIllustrativeNote = "the product radii are illustrative constants chosen by the user";
constexpr const char* kSemiRigorousNote =
    "m_lower is a semi-rigorous bound built from sampled |f'| with a safety factor of 2, not interval arithmetic";
constexpr const char* kSurrogateNote = "order and growth values are finite-radius surrogates of limits";
constexpr const char* kFiniteDifferenceNote = "dilatation values are finite-difference estimates";

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::invalid_argument:
    case Errc::invalid_spec:
      return kBadArguments;
    case Errc::io_failure:
      return kIoFailure;
    case Errc::gamma_too_small:
      return kGammaTooSmall;
    case Errc::refinement_cap_exceeded:
      return kRefinementCap;
    case Errc::degenerate_jacobian:
      return kVerificationFailed;
    default:
      return kNumerical;
  }
}

std::vector<double> parse_reals(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, fmt::format("cannot parse {} '{}'", what, text));
    }
  }
  if (expected != 0 && v.size() != expected) {
    throw Error(Errc::invalid_argument, fmt::format("{} needs {} comma-separated numbers, got '{}'", what, expected, text));
  }
  return v;
}

ComplexValue parse_point(const std::string& text) {
  const auto v = parse_reals(text, 2, "--point");
  return {v[0], v[1]};
}

raster::Window parse_window(const std::string& window, const std::string& res) {
  const auto v = parse_reals(window, 4, "--window");
  raster::Window w{v[0], v[1], v[2], v[3], 0, 0};
  const auto x = res.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(res);
    std::size_t used_w = 0;
    std::size_t used_h = 0;
    const std::string ws = res.substr(0, x);
    const std::string hs = res.substr(x + 1);
    w.width_px = std::stoi(ws, &used_w);
    w.height_px = std::stoi(hs, &used_h);
    if (used_w != ws.size() || used_h != hs.size()) throw std::invalid_argument(res);
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, fmt::format("--res expects WxH, got '{}'", res));
  }
  raster::validate(w);
  return w;
}

Json complex_json(ComplexValue z) { return Json::array({z.real(), z.imag()}); }

Json report(const std::string& command, const std::string& function, Json parameters) {
  Json j;
  j["schema"] = defaults::kReportSchema;
  j["tool_version"] = defaults::kToolVersion;
  j["command"] = command;
  j["function"] = function;
  j["parameters"] = std::move(parameters);
  j["results"] = Json::object();
  j["disclaimers"] = Json::array();
  return j;
}

void add_tag_disclaimers(Json& j, const FunctionSpec& spec) {
  for (const auto& tag : spec.tags()) {
    if (tag == "totally-disconnected-K") j["disclaimers"].push_back(kDisconnectedNote);
    if (tag == "illustrative-constants") j["disclaimers"].push_back(kIllustrativeNote);
  }
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(Errc::io_failure, fmt::format("cannot open '{}' for writing", path));
  f << text;
  if (!f) throw Error(Errc::io_failure, fmt::format("error writing '{}'", path));
}

template <typename Writer>
void write_text_file(const std::string& path, Writer&& writer) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::io_failure, fmt::format("cannot open '{}' for writing", path));
  writer(f);
  if (!f) throw Error(Errc::io_failure, fmt::format("error writing '{}'", path));
}

Json budget_json(const orbit::OrbitBudget& b) {
  return {{"max_iter", b.max_iter}, {"bound_radius", b.bound_radius}, {"escape_radius", b.escape_radius}};
}

struct BudgetFlags {
  orbit::OrbitBudget budget{defaults::kMaxIter, defaults::kBoundRadius, defaults::kEscapeRadius};

  void add(CLI::App* app) {
    app->add_option("--max-iter", budget.max_iter, "iteration budget")->capture_default_str();
    app->add_option("--bound-radius", budget.bound_radius, "orbits staying inside are bounded")->capture_default_str();
    app->add_option("--escape-radius", budget.escape_radius, "orbits passing it have escaped")->capture_default_str();
  }
};

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  std::string function;
  std::string window = fmt::format("{},{},{},{}", defaults::kWindow[0], defaults::kWindow[1], defaults::kWindow[2],
                                   defaults::kWindow[3]);
  std::string res = fmt::format("{}x{}", defaults::kWidthPx, defaults::kHeightPx);
  BudgetFlags budget;
  std::string image = defaults::kImagePath;
  std::string report;
};

int cmd_render(const RenderArgs& a, unsigned threads, std::ostream& out) {
  const FunctionSpec spec = parse_function_spec(a.function);
  const raster::Window w = parse_window(a.window, a.res);
  orbit::validate(a.budget.budget);
  const bool png = a.image.size() >= 4 && a.image.compare(a.image.size() - 4, 4, ".png") == 0;

  raster::PixelGrid grid = raster::render_k_set(spec, w, a.budget.budget, threads);
  const raster::RasterStats s = raster::compute_stats(grid);
  raster::write_image(grid, a.image, png ? raster::ImageFormat::png : raster::ImageFormat::pgm);

  Json params = budget_json(a.budget.budget);
  params["window"] = {w.x_min, w.x_max, w.y_min, w.y_max};
  params["width_px"] = w.width_px;
  params["height_px"] = w.height_px;
  params["image"] = a.image;
  params["format"] = png ? "png" : "pgm";
  Json j = report("render", spec.name, std::move(params));
  j["results"] = {{"bounded_fraction", s.bounded_fraction},
                  {"escaped_fraction", s.escaped_fraction},
                  {"undetermined_fraction", s.undetermined_fraction},
                  {"component_count_4", s.component_count_4},
                  {"component_count_8", s.component_count_8},
                  {"largest_component_px", s.largest_component_px}};
  j["disclaimers"].push_back(kEscapedNote);
  j["disclaimers"].push_back(kComponentsNote);
  add_tag_disclaimers(j, spec);
  emit(j, a.report, out);
  return kOk;
}

// ---- certify ---------------------------------------------------------------

struct CertifyArgs {
  std::string function;
  double r_min = 0.0;
  double r_max = 0.0;
  int grid = defaults::kCertifyGrid;
  int samples = defaults::kCircleSamples;
  std::string csv;
  std::string report;
};

Json row_json(const radial::RadialScanRow& r) {
  return {{"r", r.r},           {"m_est", r.m_est},         {"m_lower", r.m_lower},
          {"M_est", r.M_est},   {"theta_min", r.theta_min}, {"certified", r.certified}};
}

int cmd_certify(const CertifyArgs& a, unsigned threads, std::ostream& out) {
  const FunctionSpec spec = parse_function_spec(a.function);
  const auto rows = radial::spl_certificate(spec, a.r_min, a.r_max, a.grid, a.samples, threads);
  if (!a.csv.empty()) write_text_file(a.csv, [&](std::ostream& f) { radial::write_scan_csv(f, rows); });

  Json certified = Json::array();
  Json all = Json::array();
  for (const auto& r : rows) {
    if (r.certified) certified.push_back(r.r);
    all.push_back(row_json(r));
  }
  Json j = report("certify", spec.name,
                  {{"r_min", a.r_min}, {"r_max", a.r_max}, {"grid", a.grid}, {"n_samples", a.samples},
                   {"csv", a.csv}});
  j["results"]["certified_count"] = certified.size();
  j["results"]["certified_radii"] = certified;
  j["results"]["summary"] = certified.empty()
                                ? std::string("no certified radius in the scanned range")
                                : fmt::format("{} of {} radii certified", certified.size(), rows.size());
  j["results"]["rows"] = all;
  j["disclaimers"].push_back(kSemiRigorousNote);
  add_tag_disclaimers(j, spec);
  emit(j, a.report, out);
  return kOk;
}

// ---- scan ------------------------------------------------------------------

struct ScanArgs {
  std::string function;
  std::string radii = fmt::format("{},{},{}", defaults::kOrderRadii[0], defaults::kOrderRadii[1],
                                  defaults::kOrderRadii[2]);
  int power = defaults::kGrowthPower;
  double r_max = defaults::kGrowthRMax;
  int grid = defaults::kGrowthGrid;
  int samples = defaults::kCircleSamples;
  std::string report;
};

int cmd_scan(const ScanArgs& a, unsigned threads, std::ostream& out) {
  const FunctionSpec spec = parse_function_spec(a.function);
  const auto radii = parse_reals(a.radii, 0, "--radii");
  const auto profile = radial::order_profile(spec, radii, a.samples);
  const auto growth = radial::minmod_growth_check(spec, a.power, a.r_max, a.grid, a.samples, threads);

  Json j = report("scan", spec.name,
                  {{"radii", radii}, {"power", a.power}, {"r_max", a.r_max}, {"grid", a.grid}, {"n_samples", a.samples}});
  j["results"]["order_profile"] = profile;
  j["results"]["order_estimate"] = *std::max_element(profile.begin(), profile.end());
  j["results"]["growth"] = {{"r_best", growth.r_best},
                            {"ratio_best", growth.ratio_best},
                            {"log_ratio_best", growth.log_ratio_best}};
  j["disclaimers"].push_back(kSurrogateNote);
  add_tag_disclaimers(j, spec);
  emit(j, a.report, out);
  return kOk;
}

// ---- winding / surround ----------------------------------------------------

struct WindingArgs {
  std::string function;
  double radius = 0.0;
  std::string point = "0,0";
  double tol = defaults::kTraceTol;
  int samples = defaults::kCircleSamples;
  std::string trace_csv;
  std::string report;
};

Json surround_json(const contour::SurroundResult& s) {
  return {{"result", s.result}, {"winding", s.winding}, {"m_lower", s.m_lower}};
}

int cmd_winding(const WindingArgs& a, std::ostream& out) {
  const FunctionSpec spec = parse_function_spec(a.function);
  const ComplexValue w = parse_point(a.point);
  const contour::CurveTrace trace = contour::trace_circle_image(spec, a.radius, a.tol);
  if (!a.trace_csv.empty()) write_text_file(a.trace_csv, [&](std::ostream& f) { contour::write_trace_csv(f, trace); });
  const int winding =
      w == ComplexValue{} ? contour::winding_number(trace, w) : contour::count_preimages(spec, a.radius, w, a.tol);
  const auto surround = contour::surrounds_disc(spec, a.radius, a.samples, a.tol);

  Json j = report("winding", spec.name,
                  {{"radius", a.radius}, {"point", complex_json(w)}, {"tol", a.tol}, {"n_samples", a.samples}});
  j["results"]["winding"] = winding;
  j["results"]["trace_points"] = trace.points.size();
  j["results"]["surround"] = surround_json(surround);
  j["disclaimers"].push_back(kSemiRigorousNote);
  add_tag_disclaimers(j, spec);
  emit(j, a.report, out);
  return kOk;
}

int cmd_surround(const WindingArgs& a, std::ostream& out) {
  const FunctionSpec spec = parse_function_spec(a.function);
  const auto s = contour::surrounds_disc(spec, a.radius, a.samples, a.tol);
  Json j = report("surround", spec.name, {{"radius", a.radius}, {"tol", a.tol}, {"n_samples", a.samples}});
  j["results"] = surround_json(s);
  j["disclaimers"].push_back(kSemiRigorousNote);
  add_tag_disclaimers(j, spec);
  emit(j, a.report, out);
  return kOk;
}

// ---- surgery ---------------------------------------------------------------

struct SurgeryArgs {
  double gamma = defaults::kGamma;
  int levels = defaults::kLevels;
  int samples = defaults::kChainSamples;
  int seam_samples = defaults::kSeamSamples;
  int dilatation_points = defaults::kDilatationPoints;
  double h = defaults::kDilatationStep;
  std::string report;
};

Json finite_or_null(const std::vector<double>& v, int from, int to) {
  Json a = Json::array();
  for (int i = from; i <= to; ++i) a.push_back(v[static_cast<std::size_t>(i)]);
  return a;
}

int cmd_surgery(const SurgeryArgs& a, unsigned threads, std::ostream& out) {
  const surgery::SurgeryLadder ld = surgery::build_ladder(a.gamma, a.levels);
  const surgery::LadderCheck lc = surgery::verify_ladder(ld, defaults::kLadderTolerance);

  surgery::InterpolationConstants constants;
  bool constants_ok = true;
  try {
    constants = surgery::check_constants(ld);
  } catch (const std::logic_error&) {
    constants_ok = false;
  }

  const double seam = surgery::verify_seams(ld, a.seam_samples, threads);
  const bool seams_ok = seam < defaults::kSeamTolerance;

  Json chain = Json::array();
  bool chain_ok = true;
  for (int n = 1; n <= ld.n_max - 2; ++n) {
    const bool ok = surgery::verify_annulus_chain(ld, n, a.samples, threads);
    chain_ok = chain_ok && ok;
    chain.push_back({{"level", n}, {"ok", ok}});
  }

  Json dilatation = Json::array();
  bool dilatation_ok = true;
  for (const auto& zone : surgery::interpolation_zones(ld)) {
    const auto s = surgery::sweep_dilatation(ld, zone, a.dilatation_points, a.h, defaults::kDilatationSlack, threads);
    const auto hyp = surgery::measure_hypotheses(ld, zone, a.seam_samples);
    dilatation_ok = dilatation_ok && s.ok;
    dilatation.push_back({{"zone", surgery::to_string(zone)},
                          {"points", s.points},
                          {"k_max", s.k_max},
                          {"k_mean", s.k_mean},
                          {"bound", s.bound},
                          {"hypothesis_C", hyp.C},
                          {"hypothesis_bound", hyp.dilatation_bound},
                          {"ok", s.ok}});
  }

  const bool all_ok = lc.ok && constants_ok && seams_ok && chain_ok && dilatation_ok;
  Json j = report("surgery", fmt::format("surgery:gamma={},levels={}", a.gamma, a.levels),
                  {{"gamma", a.gamma},
                   {"levels", a.levels},
                   {"chain_samples", a.samples},
                   {"seam_samples", a.seam_samples},
                   {"dilatation_points", a.dilatation_points},
                   {"h", a.h},
                   {"dilatation_slack", defaults::kDilatationSlack},
                   {"seam_tolerance", defaults::kSeamTolerance},
                   {"ladder_tolerance", defaults::kLadderTolerance}});
  Json& r = j["results"];
  r["ladder"] = {{"log_R", finite_or_null(ld.log_R, 0, ld.n_max + 1)},
                 {"log_P", finite_or_null(ld.log_P, 1, ld.n_max)},
                 {"log_Q", finite_or_null(ld.log_Q, 1, ld.n_max)},
                 {"log_S", finite_or_null(ld.log_S, 1, ld.n_max)},
                 {"log_T", finite_or_null(ld.log_T, 1, ld.n_max)},
                 {"log_abs_a", finite_or_null(ld.log_abs_a, 1, ld.n_max)},
                 {"log_abs_b", finite_or_null(ld.log_abs_b, 1, ld.n_max)},
                 {"recurrence_rel_err", lc.recurrence_rel_err},
                 {"gap_rel_err", lc.gap_rel_err},
                 {"ordered", lc.ordered},
                 {"ok", lc.ok}};
  r["constants"] = {{"delta0", constants.delta0},
                    {"delta1", constants.delta1},
                    {"C", constants.C},
                    {"k", constants.k},
                    {"ok", constants_ok}};
  r["seams"] = {{"max_mismatch", seam}, {"ok", seams_ok}};
  r["annulus_chain"] = chain;
  r["dilatation"] = dilatation;
  r["ok"] = all_ok;
  j["disclaimers"].push_back(kFiniteDifferenceNote);
  emit(j, a.report, out);
  return all_ok ? kOk : kVerificationFailed;
}

// ---- orbit -----------------------------------------------------------------

struct OrbitArgs {
  std::string function;
  std::string seeds_path;
  std::vector<std::string> seeds;
  BudgetFlags budget;
  std::string csv;
  std::string report;
};

int cmd_orbit(const OrbitArgs& a, unsigned threads, std::ostream& out) {
  const FunctionSpec spec = parse_function_spec(a.function);
  orbit::validate(a.budget.budget);
  std::vector<ComplexValue> seeds;
  if (!a.seeds_path.empty()) {
    std::ifstream f(a.seeds_path);
    if (!f) throw Error(Errc::io_failure, fmt::format("cannot open '{}'", a.seeds_path));
    seeds = orbit::read_seeds_csv(f);
  }
  for (const auto& s : a.seeds) seeds.push_back(parse_point(s));
  if (seeds.empty()) throw Error(Errc::invalid_argument, "no seeds: pass --seed re,im or --seeds file.csv");

  const auto verdicts = orbit::classify_batch(spec, seeds, a.budget.budget, threads);
  if (!a.csv.empty()) {
    write_text_file(a.csv, [&](std::ostream& f) { orbit::write_verdicts_csv(f, seeds, verdicts); });
  }

  Json params = budget_json(a.budget.budget);
  params["seed_count"] = seeds.size();
  params["seeds_file"] = a.seeds_path;
  params["csv"] = a.csv;
  Json j = report("orbit", spec.name, std::move(params));
  std::size_t counts[3] = {0, 0, 0};
  Json list = Json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& v = verdicts[i];
    ++counts[static_cast<int>(v.status)];
    if (a.csv.empty()) {
      list.push_back({{"seed", complex_json(seeds[i])},
                      {"status", orbit::to_string(v.status)},
                      {"iterations", v.iterations_used},
                      {"escape_iteration", v.escape_iteration ? Json(*v.escape_iteration) : Json(nullptr)},
                      {"max_log_abs", v.max_log_abs}});
    }
  }
  j["results"]["bounded"] = counts[static_cast<int>(orbit::Status::bounded)];
  j["results"]["escaped"] = counts[static_cast<int>(orbit::Status::escaped)];
  j["results"]["undetermined"] = counts[static_cast<int>(orbit::Status::undetermined)];
  if (a.csv.empty()) j["results"]["verdicts"] = list;
  j["disclaimers"].push_back(kEscapedNote);
  add_tag_disclaimers(j, spec);
  emit(j, a.report, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on entire functions: bounded-orbit rasters, minimum-modulus certificates, "
               "winding numbers and a quasiregular surgery model.",
               "entdyn"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0: THREADS env or all cores)");

  RenderArgs render;
  auto* c_render = app.add_subcommand("render", "rasterize the bounded-orbit set");
  c_render->add_option("--function", render.function, "function spec, e.g. quad:-1")->required();
  c_render->add_option("--window", render.window, "x0,x1,y0,y1")->capture_default_str();
  c_render->add_option("--res", render.res, "WxH pixels")->capture_default_str();
  render.budget.add(c_render);
  c_render->add_option("--out", render.image, "image path (.pgm or .png)")->capture_default_str();
  c_render->add_option("--report", render.report, "JSON report path (default stdout)");

  CertifyArgs certify;
  auto* c_certify = app.add_subcommand("certify", "scan radii for m(r) > r certificates");
  c_certify->add_option("--function", certify.function)->required();
  c_certify->add_option("--r-min", certify.r_min)->required();
  c_certify->add_option("--r-max", certify.r_max)->required();
  c_certify->add_option("--grid", certify.grid)->capture_default_str();
  c_certify->add_option("--samples", certify.samples, "coarse samples per circle")->capture_default_str();
  c_certify->add_option("--out", certify.csv, "CSV path for the scan rows");
  c_certify->add_option("--report", certify.report, "JSON report path (default stdout)");

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "order estimate and minimum-modulus growth");
  c_scan->add_option("--function", scan.function)->required();
  c_scan->add_option("--radii", scan.radii, "radii for the order estimate")->capture_default_str();
  c_scan->add_option("--power", scan.power)->capture_default_str();
  c_scan->add_option("--r-max", scan.r_max)->capture_default_str();
  c_scan->add_option("--grid", scan.grid)->capture_default_str();
  c_scan->add_option("--samples", scan.samples)->capture_default_str();
  c_scan->add_option("--report", scan.report);

  WindingArgs winding;
  auto* c_winding = app.add_subcommand("winding", "winding number of f(|z| = r) about a point");
  c_winding->add_option("--function", winding.function)->required();
  c_winding->add_option("--radius", winding.radius)->required();
  c_winding->add_option("--point", winding.point, "re,im")->capture_default_str();
  c_winding->add_option("--tol", winding.tol)->capture_default_str();
  c_winding->add_option("--samples", winding.samples)->capture_default_str();
  c_winding->add_option("--trace", winding.trace_csv, "CSV path for the traced curve");
  c_winding->add_option("--report", winding.report);

  WindingArgs surround;
  auto* c_surround = app.add_subcommand("surround", "does f(|z| = r) surround the closed disc");
  c_surround->add_option("--function", surround.function)->required();
  c_surround->add_option("--radius", surround.radius)->required();
  c_surround->add_option("--tol", surround.tol)->capture_default_str();
  c_surround->add_option("--samples", surround.samples)->capture_default_str();
  c_surround->add_option("--report", surround.report);

  SurgeryArgs surgery;
  auto* c_surgery = app.add_subcommand("surgery", "build and verify the surgery ladder");
  c_surgery->add_option("--gamma", surgery.gamma)->capture_default_str();
  c_surgery->add_option("--levels", surgery.levels)->capture_default_str();
  c_surgery->add_option("--samples", surgery.samples, "annulus-chain samples per level")->capture_default_str();
  c_surgery->add_option("--seam-samples", surgery.seam_samples)->capture_default_str();
  c_surgery->add_option("--dilatation-points", surgery.dilatation_points)->capture_default_str();
  c_surgery->add_option("--fd-step", surgery.h, "finite-difference step")->capture_default_str();
  c_surgery->add_option("--report", surgery.report);

  OrbitArgs orbit_args;
  auto* c_orbit = app.add_subcommand("orbit", "classify seed orbits");
  c_orbit->add_option("--function", orbit_args.function)->required();
  c_orbit->add_option("--seeds", orbit_args.seeds_path, "CSV file of re,im seeds");
  c_orbit->add_option("--seed", orbit_args.seeds, "re,im (repeatable)")->allow_extra_args(false);
  orbit_args.budget.add(c_orbit);
  c_orbit->add_option("--out", orbit_args.csv, "CSV path for verdicts");
  c_orbit->add_option("--report", orbit_args.report);

  std::vector<std::string> storage{"entdyn"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (*c_render) return cmd_render(render, threads, out);
    if (*c_certify) return cmd_certify(certify, threads, out);
    if (*c_scan) return cmd_scan(scan, threads, out);
    if (*c_winding) return cmd_winding(winding, out);
    if (*c_surround) return cmd_surround(surround, out);
    if (*c_surgery) return cmd_surgery(surgery, threads, out);
    if (*c_orbit) return cmd_orbit(orbit_args, threads, out);
  } catch (const Error& e) {
    fmt::print(err, "error ({}): {}\n", to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kInternal;
  }
  return kBadArguments;
}

}  // namespace entdyn::cli
