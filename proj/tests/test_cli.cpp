#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entdyn/cli.hpp"

using entdyn::cli::run;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;

  [[nodiscard]] Json json() const { return Json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("entdyn_cli_" + name)).string();
}

void check_envelope(const Json& j) {
  CHECK(j["schema"] == 1);
  CHECK(j.contains("tool_version"));
  CHECK(j.contains("function"));
  CHECK(j["parameters"].is_object());
  CHECK(j["results"].is_object());
  CHECK(j["disclaimers"].is_array());
}

}  // namespace

TEST_CASE("render") {
  const std::string image = temp_path("quad.pgm");
  const Result r = call({"render", "--function", "quad:-2+0i", "--window", "-3,3,-3,3", "--res", "64x64", "--out", image});
  CHECK(r.code == 0);
  CHECK(std::filesystem::file_size(image) == 13 + 64 * 64);
  const Json j = r.json();
  check_envelope(j);
  CHECK(j["parameters"]["width_px"] == 64);
  for (const char* key : {"bounded_fraction", "escaped_fraction", "undetermined_fraction", "component_count_4",
                          "component_count_8", "largest_component_px"}) {
    CHECK(j["results"].contains(key));
  }
  std::filesystem::remove(image);
}

TEST_CASE("render errors") {
  CHECK(call({"render", "--function", "nosuch"}).code == 2);
  CHECK(call({"render", "--function", "fatou", "--res", "64by64"}).code == 2);
  CHECK(call({"render", "--function", "fatou", "--window", "1,0,0,1"}).code == 2);
  CHECK(call({"render"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"render", "--function", "fatou", "--res", "16x16", "--out", "/nonexistent-dir/x.pgm"}).code == 3);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("product render carries the disconnectedness disclaimer") {
  const std::string image = temp_path("prod.pgm");
  const Result r = call({"render", "--function", "prod2n", "--res", "256x256", "--out", image});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK_FALSE(j["disclaimers"].empty());
  CHECK(r.out.find("totally disconnected") != std::string::npos);
  std::filesystem::remove(image);
}

TEST_CASE("certify") {
  const std::string csv = temp_path("scan.csv");
  const Result r = call({"certify", "--function", "prod2n", "--r-min", "20", "--r-max", "30", "--grid", "50", "--out", csv});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  check_envelope(j);
  CHECK(j["results"]["certified_count"].get<int>() >= 1);
  bool near_24 = false;
  for (const auto& x : j["results"]["certified_radii"]) near_24 = near_24 || std::abs(x.get<double>() - 24) < 1;
  CHECK(near_24);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,m_est,m_lower,M_est,theta_min,certified");
  std::filesystem::remove(csv);

  const Json none = call({"certify", "--function", "lambda-exp:1", "--r-min", "1", "--r-max", "100"}).json();
  CHECK(none["results"]["certified_count"] == 0);
  CHECK(none["results"]["summary"] == "no certified radius in the scanned range");

  const Json all = call({"certify", "--function", "quad:0", "--r-min", "2", "--r-max", "4"}).json();
  CHECK(all["results"]["certified_count"] == 50);
  CHECK(call({"certify", "--function", "quad:0", "--r-min", "4", "--r-max", "2"}).code == 2);
}

TEST_CASE("surgery") {
  const Result ok = call({"surgery", "--gamma", "24", "--levels", "8"});
  CHECK(ok.code == 0);
  const Json j = ok.json();
  check_envelope(j);
  CHECK(j["results"]["ok"] == true);
  CHECK(j["results"]["annulus_chain"].size() == 6);
  CHECK(j["results"]["dilatation"].size() == 15);
  CHECK(j["results"]["ladder"]["log_R"][2] == 48.0);

  CHECK(call({"surgery", "--gamma", "2", "--levels", "2"}).code == 4);
  CHECK(call({"surgery", "--gamma", "24", "--levels", "1"}).code == 2);
}

TEST_CASE("surgery verification failure exits 5") {
  // A finite-difference step wider than the annuli cannot satisfy the dilatation bounds.
  CHECK(call({"surgery", "--gamma", "24", "--levels", "3", "--fd-step", "0.5"}).code == 5);
}

TEST_CASE("winding") {
  const Result a = call({"winding", "--function", "quad:0", "--radius", "1", "--point", "0,0"});
  REQUIRE(a.code == 0);
  CHECK(a.json()["results"]["winding"] == 2);
  CHECK(call({"winding", "--function", "prod2n", "--radius", "2", "--point", "0,0"}).code == 6);
  const Result c = call({"winding", "--function", "lambda-exp:1", "--radius", "1", "--point", "0,0"});
  REQUIRE(c.code == 0);
  CHECK(c.json()["results"]["winding"] == 0);
  CHECK(c.json()["results"]["surround"]["result"] == false);
  const Result d = call({"winding", "--function", "quad:0", "--radius", "2", "--point", "1,0"});
  CHECK(d.json()["results"]["winding"] == 2);
}

TEST_CASE("surround") {
  const Json j = call({"surround", "--function", "prod2n", "--radius", "24"}).json();
  CHECK(j["results"]["result"] == true);
  CHECK(j["results"]["winding"] == 8);
  CHECK(j["results"]["m_lower"].get<double>() > 24);
}

TEST_CASE("scan") {
  const Result r = call({"scan", "--function", "lambda-exp:1"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["results"]["order_estimate"].get<double>() == doctest::Approx(1.0));
  CHECK(j["parameters"]["radii"].size() == 3);
  CHECK(call({"scan", "--function", "quad:0", "--radii", "1,10,100"}).code == 2);
}

TEST_CASE("orbit") {
  const std::string seeds = temp_path("seeds.csv");
  const std::string verdicts = temp_path("verdicts.csv");
  {
    std::ofstream f(seeds);
    f << "re,im\n0,0\n5,0\n";
  }
  const Result r = call({"orbit", "--function", "lambda-exp:0.3", "--seeds", seeds, "--seed", "0.1,0.1", "--out", verdicts});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["results"]["bounded"] == 2);
  CHECK(j["results"]["escaped"] == 1);
  std::ifstream in(verdicts);
  std::string header;
  std::getline(in, header);
  CHECK(header == "re,im,status,iterations,escape_iteration,max_log_abs");
  std::filesystem::remove(seeds);
  std::filesystem::remove(verdicts);

  CHECK(call({"orbit", "--function", "fatou"}).code == 2);
  CHECK(call({"orbit", "--function", "fatou", "--seeds", "/nonexistent-dir/s.csv"}).code == 3);
}

TEST_CASE("thread count does not reach the report") {
  const Result a = call({"--threads", "1", "certify", "--function", "prod2n", "--r-min", "20", "--r-max", "30", "--grid", "8"});
  const Result b = call({"certify", "--function", "prod2n", "--r-min", "20", "--r-max", "30", "--grid", "8", "--threads", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
