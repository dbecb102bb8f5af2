#pragma once

// INI-style run configuration:
//
//   [params]   N, gamma, K, beta
//   [grid]     cells, r_max
//   [initial]  profile = uniform-ball | parabolic-cap | concentration
//              rho0, radius | rho_center, radius | epsilon, mass
//              velocity = zero | linear | table, velocity_slope, velocity_table
//   [run]      t_end, cfl, output_every, density_floor_ratio, support_threshold_ratio
//   [audits]   energy-dissipation, inertia-identity, virial-inequality, expansion,
//              hoelder, collapse-scaling
//   [output]   csv, report
//   [testing]  self_force, transport, inject_nan_step
//
// Comments go on their own line and start with ';' or '#'. Numbers may be
// written as fractions ("5/3").

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "epr/errors.hpp"
#include "epr/params.hpp"
#include "epr/scenario.hpp"

namespace epr {

struct AuditSet {
  bool energy_dissipation = true;
  bool inertia_identity = false;
  bool virial_inequality = false;
  bool expansion = true;
  bool hoelder = true;
  bool collapse_scaling = false;
};

struct RunManifest {
  std::string name = "run";
  ScenarioConfig scenario;
  AuditSet audits;
  std::string csv_path;     // relative paths resolve against the output directory
  std::string report_path;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  auto single = [&](const std::string& part) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || trim(part.substr(used)) != "")
      throw ConfigError(fmt::format("{}: '{}' is not a number", key, raw));
    return value;
  };
  if (const auto slash = text.find('/'); slash != std::string::npos)
    return single(text.substr(0, slash)) / single(text.substr(slash + 1));
  return single(text);
}

inline bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string t = trim(raw);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, raw));
}

inline std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

/// Flattened "section.key" -> value map, rejecting unknown keys.
class Entries {
 public:
  explicit Entries(const boost::property_tree::ptree& tree) {
    static const std::map<std::string, std::set<std::string>> known = {
        {"params", {"N", "gamma", "K", "beta"}},
        {"grid", {"cells", "r_max"}},
        {"initial",
         {"profile", "rho0", "radius", "rho_center", "epsilon", "mass", "velocity", "velocity_slope",
          "velocity_table"}},
        {"run", {"t_end", "cfl", "output_every", "density_floor_ratio", "support_threshold_ratio"}},
        {"audits",
         {"energy-dissipation", "inertia-identity", "virial-inequality", "expansion", "hoelder",
          "collapse-scaling"}},
        {"output", {"csv", "report"}},
        {"testing", {"self_force", "transport", "inject_nan_step"}},
    };
    std::vector<std::string> unknown;
    for (const auto& [section, body] : tree) {
      const auto it = known.find(section);
      if (it == known.end()) {
        unknown.push_back(section);
        continue;
      }
      for (const auto& [key, value] : body) {
        const std::string full = section + "." + key;
        if (!it->second.count(key))
          unknown.push_back(full);
        else
          values_[full] = value.data();
      }
    }
    if (!unknown.empty()) {
      std::string list;
      for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("unknown configuration key(s): " + list);
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback) const {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : trim(it->second);
  }
  double number(const std::string& key, double fallback) const {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_number(key, it->second);
  }
  bool flag(const std::string& key, bool fallback) const {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_bool(key, it->second);
  }
  /// Keys present in the document that no parser branch consumed.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : values_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

inline int integer(const Entries& e, const std::string& key, int fallback) {
  const double v = e.number(key, fallback);
  if (v != std::floor(v)) throw ConfigError(fmt::format("{} must be an integer", key));
  return static_cast<int>(v);
}

inline TabulatedVelocity parse_table(const std::string& raw) {
  TabulatedVelocity table;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("initial.velocity_table: entries must be r:V pairs");
    table.knots.emplace_back(parse_number("initial.velocity_table", item.substr(0, colon)),
                             parse_number("initial.velocity_table", item.substr(colon + 1)));
  }
  return table;
}

}  // namespace detail

inline RunManifest parse_config(const std::string& text, const std::string& name = "run") {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  const detail::Entries e(tree);
  RunManifest m;
  m.name = name;

  const int N = detail::integer(e, "params.N", 3);
  const double gamma = e.number("params.gamma", 5.0 / 3.0);
  if (!(gamma >= 1.0)) throw ConfigError(fmt::format("gamma >= 1 required (got {})", gamma));
  const double K = e.number("params.K", 1.0 / gamma);
  const double beta = e.number("params.beta", 0.0);
  try {
    m.scenario.params = PhysicsParams(N, gamma, K, beta);
  } catch (const DomainError& err) {
    throw ConfigError(err.what());
  }

  auto& s = m.scenario;
  s.n_cells = detail::integer(e, "grid.cells", 512);
  s.r_max = e.number("grid.r_max", 4.0);

  const std::string profile = e.text("initial.profile", "uniform-ball");
  if (profile == "uniform-ball") {
    s.density = UniformBall{e.number("initial.rho0", 1.0), e.number("initial.radius", 1.0)};
  } else if (profile == "parabolic-cap") {
    s.density = ParabolicCap{e.number("initial.rho_center", 1.0), e.number("initial.radius", 1.0)};
  } else if (profile == "concentration") {
    s.density = Concentration{e.number("initial.epsilon", 0.1), e.number("initial.mass", 1.0)};
  } else {
    throw ConfigError("initial.profile: unknown profile '" + profile +
                      "' (expected uniform-ball, parabolic-cap or concentration)");
  }
  const std::string velocity = e.text("initial.velocity", "zero");
  if (velocity == "zero") {
    s.velocity = ZeroVelocity{};
  } else if (velocity == "linear") {
    s.velocity = LinearVelocity{e.number("initial.velocity_slope", 0.0)};
  } else if (velocity == "table") {
    if (!e.has("initial.velocity_table")) throw ConfigError("initial.velocity_table is required for velocity = table");
    s.velocity = detail::parse_table(e.text("initial.velocity_table", ""));
  } else {
    throw ConfigError("initial.velocity: unknown descriptor '" + velocity + "' (expected zero, linear or table)");
  }

  s.t_end = e.number("run.t_end", 1.0);
  s.cfl_number = e.number("run.cfl", 0.5);
  s.output_every = e.number("run.output_every", 0.1);
  s.density_floor_ratio = e.number("run.density_floor_ratio", 1e-12);
  s.support_threshold_ratio = e.number("run.support_threshold_ratio", 1e-8);

  s.hooks.self_force = e.flag("testing.self_force", true);
  s.hooks.transport = e.flag("testing.transport", true);
  if (e.has("testing.inject_nan_step"))
    s.hooks.inject_nan_at_step = detail::integer(e, "testing.inject_nan_step", 0);

  m.audits.energy_dissipation = e.flag("audits.energy-dissipation", true);
  m.audits.inertia_identity = e.flag("audits.inertia-identity", beta == 0.0);
  m.audits.virial_inequality = e.flag("audits.virial-inequality", beta == 0.0);
  m.audits.expansion = e.flag("audits.expansion", true);
  m.audits.hoelder = e.flag("audits.hoelder", true);
  m.audits.collapse_scaling = e.flag("audits.collapse-scaling", false);

  m.csv_path = e.text("output.csv", name + ".csv");
  m.report_path = e.text("output.report", name + ".report.txt");

  if (const auto unused = e.unused(); !unused.empty()) {
    std::string list;
    for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("key(s) not applicable to the selected profile/velocity: " + list);
  }

  s.validate();
  if (m.audits.inertia_identity && beta != 0.0)
    throw ConfigError("audits.inertia-identity requires beta = 0 (the second-inertia identity holds only without damping)");
  if (m.audits.virial_inequality && beta != 0.0)
    throw ConfigError("audits.virial-inequality requires beta = 0");
  return m;
}

inline RunManifest load_config(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), name);
}

/// Complete configuration with every default written out.
inline std::string to_config_text(const RunManifest& m) {
  using detail::fmt_num;
  const auto& s = m.scenario;
  const auto& p = s.params;
  std::string out;
  out += "[params]\n";
  out += fmt::format("N = {}\ngamma = {}\nK = {}\nbeta = {}\n", p.N(), fmt_num(p.gamma()), fmt_num(p.K()),
                     fmt_num(p.beta()));
  out += "\n[grid]\n";
  out += fmt::format("cells = {}\nr_max = {}\n", s.n_cells, fmt_num(s.r_max));
  out += "\n[initial]\n";
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformBall>)
          out += fmt::format("profile = uniform-ball\nrho0 = {}\nradius = {}\n", fmt_num(d.rho0), fmt_num(d.radius));
        else if constexpr (std::is_same_v<T, ParabolicCap>)
          out += fmt::format("profile = parabolic-cap\nrho_center = {}\nradius = {}\n", fmt_num(d.rho_center),
                             fmt_num(d.radius));
        else
          out += fmt::format("profile = concentration\nepsilon = {}\nmass = {}\n", fmt_num(d.epsilon),
                             fmt_num(d.mass));
      },
      s.density);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZeroVelocity>) {
          out += "velocity = zero\n";
        } else if constexpr (std::is_same_v<T, LinearVelocity>) {
          out += fmt::format("velocity = linear\nvelocity_slope = {}\n", fmt_num(v.slope));
        } else {
          out += "velocity = table\nvelocity_table = ";
          for (std::size_t k = 0; k < v.knots.size(); ++k)
            out += fmt::format("{}{}:{}", k ? ", " : "", fmt_num(v.knots[k].first), fmt_num(v.knots[k].second));
          out += "\n";
        }
      },
      s.velocity);
  out += "\n[run]\n";
  out += fmt::format("t_end = {}\ncfl = {}\noutput_every = {}\ndensity_floor_ratio = {}\nsupport_threshold_ratio = {}\n",
                     fmt_num(s.t_end), fmt_num(s.cfl_number), fmt_num(s.output_every),
                     fmt_num(s.density_floor_ratio), fmt_num(s.support_threshold_ratio));
  out += "\n[audits]\n";
  out += fmt::format(
      "energy-dissipation = {}\ninertia-identity = {}\nvirial-inequality = {}\nexpansion = {}\nhoelder = {}\n"
      "collapse-scaling = {}\n",
      m.audits.energy_dissipation, m.audits.inertia_identity, m.audits.virial_inequality, m.audits.expansion,
      m.audits.hoelder, m.audits.collapse_scaling);
  out += "\n[output]\n";
  out += fmt::format("csv = {}\nreport = {}\n", m.csv_path, m.report_path);
  out += "\n[testing]\n";
  out += fmt::format("self_force = {}\ntransport = {}\n", s.hooks.self_force, s.hooks.transport);
  if (s.hooks.inject_nan_at_step) out += fmt::format("inject_nan_step = {}\n", *s.hooks.inject_nan_at_step);
  return out;
}

}  // namespace epr
