#include "harvest/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace harvest {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("scenario: " + where + ": " + what);
}

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

double get_number(const json& j, const std::string& where, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

bool get_bool(const json& j, const std::string& where, const char* key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean())
    fail(where, std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& where,
                       const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

SwitchingSpec parse_switching(const json& j, double t) {
  const std::string where = "system.switching";
  expect_keys(j, where, {"family", "sigma", "t_half", "delta"});
  if (!j.contains("family")) fail(where, "missing 'family'");
  const std::string family = get_string(j, where, "family");

  if (family == "gaussian" || family == "truncated-gaussian") {
    if (j.contains("delta"))
      fail(where, "'delta' does not apply to the " + family + " family");
    double sigma = get_number(j, where, "sigma", 0.0);
    const double t_half = get_number(j, where, "t_half", 0.0);
    if (sigma == 0.0 && t_half == 0.0) sigma = t / 5.0;
    if (sigma == 0.0) sigma = t_half / 5.0;
    if (t_half != 0.0 && std::abs(t_half - 5.0 * sigma) > 1e-12 * t_half)
      fail(where, "'t_half' must equal 5 * sigma");
    return family == "gaussian" ? SwitchingSpec::gaussian(sigma)
                                : SwitchingSpec::truncated_gaussian(sigma);
  }
  if (family == "compact-polynomial") {
    if (j.contains("sigma"))
      fail(where, "'sigma' does not apply to the compact-polynomial family");
    if (!j.contains("delta")) fail(where, "missing 'delta'");
    const double delta = get_number(j, where, "delta", 0.0);
    const double t_half = get_number(j, where, "t_half", t);
    return SwitchingSpec::compact_polynomial(delta, t_half);
  }
  fail(where, "unknown family '" + family + "'");
}

void parse_system(const json& j, SystemParams& sp) {
  const std::string where = "system";
  expect_keys(j, where, {"t", "lambda", "omega_t", "allow_timelike", "switching"});
  sp.t = get_number(j, where, "t", sp.t);
  if (!(sp.t > 0.0)) fail(where, "'t' must be positive");
  sp.lambda = get_number(j, where, "lambda", sp.lambda);
  sp.omega_t = get_number(j, where, "omega_t", sp.omega_t);
  sp.allow_timelike = get_bool(j, where, "allow_timelike", sp.allow_timelike);
  if (j.contains("switching"))
    sp.switching = parse_switching(j.at("switching"), sp.t);
}

void parse_geometry(const json& j, GeometryFamily& g) {
  const std::string where = "geometry";
  expect_keys(j, where,
              {"family", "x", "r", "theta", "theta21", "theta32", "l", "n",
               "base"});
  if (j.contains("family")) {
    const std::string name = get_string(j, where, "family");
    const auto kind = family_from_name(name);
    if (!kind) fail(where, "unknown family '" + name + "'");
    g.kind = *kind;
  }
  g.x = get_number(j, where, "x", g.x);
  g.r = get_number(j, where, "r", g.r);
  g.theta = get_number(j, where, "theta", g.theta);
  g.theta21 = get_number(j, where, "theta21", g.theta21);
  g.theta32 = get_number(j, where, "theta32", g.theta32);
  g.l = get_number(j, where, "l", g.l);
  if (j.contains("n")) {
    const json& v = j.at("n");
    if (!v.is_number_integer() || v.get<long long>() < 2)
      fail(where, "'n' must be an integer >= 2");
    g.n = v.get<std::size_t>();
  }
  if (j.contains("base")) {
    const std::string name = get_string(j, where, "base");
    const auto kind = family_from_name(name);
    if (!kind) fail(where, "unknown base family '" + name + "'");
    g.base = *kind;
  }
}

void parse_axes(const json& j, std::vector<SweepAxis>& axes) {
  const std::string where = "sweep.axes";
  if (!j.is_array()) fail(where, "expected an array");
  for (const json& a : j) {
    expect_keys(a, where, {"param", "lo", "hi", "count"});
    if (!a.contains("param")) fail(where, "missing 'param'");
    SweepAxis axis;
    axis.param = get_string(a, where, "param");
    const bool known = axis.param == "x" || axis.param == "r" ||
                       axis.param == "theta" || axis.param == "theta21" ||
                       axis.param == "theta32" || axis.param == "l" ||
                       axis.param == "omega_t";
    if (!known) fail(where, "unknown parameter '" + axis.param + "'");
    axis.lo = get_number(a, where, "lo", 0.0);
    axis.hi = get_number(a, where, "hi", axis.lo);
    if (a.contains("count")) {
      const json& v = a.at("count");
      if (!v.is_number_integer() || v.get<long long>() < 1)
        fail(where, "'count' must be an integer >= 1");
      axis.count = v.get<std::size_t>();
    }
    axes.push_back(std::move(axis));
  }
}

void parse_sweep(const json& j, ScenarioConfig& cfg) {
  const std::string where = "sweep";
  expect_keys(j, where, {"axes", "refine"});
  if (j.contains("axes")) parse_axes(j.at("axes"), cfg.axes);
  cfg.refine = get_bool(j, where, "refine", cfg.refine);
}

void parse_output(const json& j, OutputSpec& out) {
  const std::string where = "output";
  expect_keys(j, where, {"path", "full_precision"});
  if (j.contains("path")) out.path = get_string(j, where, "path");
  out.full_precision =
      get_bool(j, where, "full_precision", out.full_precision);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: malformed JSON: ") +
                                e.what());
  }
  expect_keys(doc, "document", {"system", "geometry", "sweep", "output"});
  ScenarioConfig cfg;
  if (doc.contains("system")) parse_system(doc.at("system"), cfg.system);
  if (doc.contains("geometry")) parse_geometry(doc.at("geometry"), cfg.geometry);
  if (doc.contains("sweep")) parse_sweep(doc.at("sweep"), cfg);
  if (doc.contains("output")) parse_output(doc.at("output"), cfg.output);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace harvest
