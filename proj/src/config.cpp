#include "trmc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "trmc/error.hpp"

namespace trmc {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || std::isnan(d))
    throw ConfigError("expected a number, got '" + s + "'");
  return d;
}

template <class Int>
Int to_int(std::string_view v) {
  Int out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true or false, got '" + std::string(v) + "'");
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define TRMC_DOUBLE(key, field) \
  Key{key, [](RunConfig& c, std::string_view v) { c.field = to_double(v); }, \
      [](const RunConfig& c) { return fmt_double(c.field); }}
#define TRMC_INT(key, field)                                                                   \
  Key{key, [](RunConfig& c, std::string_view v) { c.field = to_int<decltype(c.field)>(v); }, \
      [](const RunConfig& c) { return std::to_string(c.field); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      Key{"experiment", [](RunConfig& c, std::string_view v) { c.experiment = parse_experiment(v); },
          [](const RunConfig& c) { return std::string(experiment_name(c.experiment)); }},
      Key{"scheme", [](RunConfig& c, std::string_view v) { c.scheme.scheme = parse_scheme(v); },
          [](const RunConfig& c) { return std::string(scheme_name(c.scheme.scheme)); }},
      TRMC_INT("N", N),
      TRMC_DOUBLE("dt_over_eps", dt_over_eps),
      TRMC_DOUBLE("eps", eps),
      TRMC_INT("steps", steps),
      TRMC_INT("seed", seed),
      Key{"output", [](RunConfig& c, std::string_view v) { c.output = std::string(v); },
          [](const RunConfig& c) { return c.output; }},
      TRMC_DOUBLE("kernel.K", scheme.K),
      TRMC_DOUBLE("kernel.alpha", scheme.alpha),
      Key{"trmc.m",
          [](RunConfig& c, std::string_view v) {
            const int m = to_int<int>(v);
            c.scheme.trmc_m = m == 0 ? kUntruncated : m;
          },
          [](const RunConfig& c) {
            return std::to_string(c.scheme.trmc_m == kUntruncated ? 0 : c.scheme.trmc_m);
          }},
      Key{"trmc.update_sigma",
          [](RunConfig& c, std::string_view v) { c.scheme.update_sigma = to_bool(v); },
          [](const RunConfig& c) { return std::string(c.scheme.update_sigma ? "true" : "false"); }},
      TRMC_DOUBLE("adaptive.delta1", scheme.adaptive.delta1),
      TRMC_DOUBLE("adaptive.delta2", scheme.adaptive.delta2),
      TRMC_INT("adaptive.m_init", scheme.adaptive.m_init),
      TRMC_INT("adaptive.m_min", scheme.adaptive.m_min),
      TRMC_INT("adaptive.m_cap", scheme.adaptive.m_cap),
      Key{"adaptive.indicator",
          [](RunConfig& c, std::string_view v) { c.scheme.adaptive.indicator = parse_indicator(v); },
          [](const RunConfig& c) { return std::string(indicator_name(c.scheme.adaptive.indicator)); }},
      Key{"wb.length",
          [](RunConfig& c, std::string_view v) { c.scheme.wb_length = parse_length_def(v); },
          [](const RunConfig& c) { return std::string(length_def_name(c.scheme.wb_length)); }},
      TRMC_DOUBLE("wb.m_max", scheme.wb_m_max),
      TRMC_DOUBLE("init.u1x", init.u1x),
      TRMC_DOUBLE("init.u2x", init.u2x),
      TRMC_DOUBLE("init.T1", init.T1),
      TRMC_DOUBLE("init.T2", init.T2),
      TRMC_DOUBLE("shock.mach", shock.mach),
      TRMC_DOUBLE("shock.T_L", shock.T_L),
      TRMC_DOUBLE("shock.rho_L", shock.rho_L),
      TRMC_DOUBLE("shock.gamma", shock.gamma),
      TRMC_INT("shock.cells", shock.n_cells),
      TRMC_INT("shock.particles_per_cell", shock.particles_per_cell),
      TRMC_DOUBLE("shock.domain_mfp", shock.domain_mfp),
      TRMC_DOUBLE("shock.cfl", shock.cfl),
      TRMC_DOUBLE("shock.dt", shock.dt),
      TRMC_INT("shock.average_from", shock.average_from),
      TRMC_INT("shock.batches", shock.batches),
      TRMC_INT("shock.se_pool", shock.se_pool),
      TRMC_INT("shock.threads", shock.threads),
      TRMC_INT("reference.replicas", reference_replicas),
      TRMC_INT("reference.particles_per_cell", reference_particles_per_cell),
  };
  return table;
}

#undef TRMC_DOUBLE
#undef TRMC_INT

}  // namespace

Experiment parse_experiment(std::string_view name) {
  if (name == "HOMOGENEOUS") return Experiment::Homogeneous;
  if (name == "SHOCK") return Experiment::Shock;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::string_view experiment_name(Experiment e) {
  return e == Experiment::Homogeneous ? "HOMOGENEOUS" : "SHOCK";
}

void RunConfig::validate() const {
  if (N < 2) throw ConfigError("N must be >= 2");
  if (experiment == Experiment::Homogeneous && N % 2 != 0)
    throw ConfigError("N must be even for the two-Maxwellian initial data");
  if (!(dt_over_eps > 0.0)) throw ConfigError("dt_over_eps must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (!(scheme.K > 0.0)) throw ConfigError("kernel.K must be positive");
  if (!(scheme.alpha >= 0.0 && scheme.alpha <= 1.0)) throw ConfigError("kernel.alpha must lie in [0,1]");
  if (scheme.trmc_m < 1) throw ConfigError("trmc.m must be >= 0 (0 = untruncated)");
  if (!(scheme.wb_m_max >= 0.0)) throw ConfigError("wb.m_max must be >= 0");
  if (!(init.T1 >= 0.0 && init.T2 >= 0.0)) throw ConfigError("init temperatures must be >= 0");
  if (reference_replicas < 1) throw ConfigError("reference.replicas must be >= 1");
  if (reference_particles_per_cell < 2) throw ConfigError("reference.particles_per_cell must be >= 2");
  scheme.adaptive.validate();
  if (experiment == Experiment::Shock) shock_config().validate();
}

ShockConfig RunConfig::shock_config() const {
  ShockConfig s = shock;
  s.eps = eps;
  s.steps = steps;
  return s;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    const Key* found = nullptr;
    for (const auto& k : keys())
      if (key == k.name) found = &k;
    if (!found) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    try {
      found->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + std::string(key) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string echo_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : keys()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace trmc
