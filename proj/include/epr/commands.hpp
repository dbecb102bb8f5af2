#pragma once

// Run, sweep, bounds and emden commands behind the `epr` executable. Each
// command returns its text output so tests can compare it directly; files
// are written only when an output directory is given.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "epr/audits.hpp"
#include "epr/characteristics.hpp"
#include "epr/config.hpp"
#include "epr/diagnostics.hpp"
#include "epr/solver.hpp"

namespace epr {

inline constexpr const char* csv_header =
    "t,M,E,H,Hddot_integral,R_support,omega_volume,potential_energy,kinetic_dissipation,max_rho,max_dVdr";

inline std::string csv_row(const DiagnosticsRecord& r) {
  return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", r.t,
                     r.M, r.E, r.H, r.Hddot_integral, r.R_support, r.omega_volume, r.potential_energy,
                     r.kinetic_dissipation, r.max_rho, r.max_dVdr);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? fmt::format("{:.17g}", *v) : std::string("absent");
}

// ε levels and grid of the concentration family probed by collapse-scaling.
inline constexpr double collapse_epsilons[] = {0.2, 0.1, 0.05, 0.025};
inline RadialGrid collapse_grid(int dimension) { return RadialGrid(1024, 1.0, dimension); }

struct RunOutcome {
  RunManifest manifest;
  Termination reason = Termination::completed;
  std::string message;
  double last_valid_time = 0.0;
  std::vector<DiagnosticsRecord> series;
  std::optional<BoundReport> initial_bounds;
  std::optional<BoundReport> final_bounds;
  std::vector<AuditVerdict> verdicts;

  bool completed() const { return reason == Termination::completed; }
  bool ok() const {
    return completed() && std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.ok(); });
  }
  double mass_drift() const {
    if (series.empty() || series.front().M == 0.0) return 0.0;
    return std::abs(series.back().M - series.front().M) / series.front().M;
  }
};

inline std::vector<std::string> enabled_audits(const AuditSet& a) {
  std::vector<std::string> names;
  if (a.energy_dissipation) names.emplace_back("energy-dissipation");
  if (a.inertia_identity) names.emplace_back("inertia-identity");
  if (a.virial_inequality) names.emplace_back("virial-inequality");
  if (a.expansion) names.emplace_back("expansion");
  if (a.hoelder) names.emplace_back("hoelder");
  if (a.collapse_scaling) names.emplace_back("collapse-scaling");
  return names;
}

/// Audits of a completed series. A massless series passes every audit vacuously.
inline std::vector<AuditVerdict> run_audits(const RunManifest& m, std::span<const DiagnosticsRecord> series,
                                            const std::optional<BoundReport>& initial) {
  const auto& p = m.scenario.params;
  std::vector<AuditVerdict> out;
  const bool massless = series.empty() || !(series.front().M > 0.0);
  for (const auto& name : enabled_audits(m.audits)) {
    if (massless) {
      out.push_back({name, AuditStatus::pass, "vacuous: zero mass"});
      continue;
    }
    if (name == "energy-dissipation") {
      if (series.size() < 3)
        out.push_back({name, AuditStatus::inconclusive, "fewer than 3 samples"});
      else
        out.push_back(energy_dissipation_audit(series, p.beta()));
    } else if (name == "inertia-identity") {
      const auto uniform = uniform_prefix(series);
      if (uniform.size() < 5)
        out.push_back({name, AuditStatus::inconclusive, "fewer than 5 uniformly spaced samples"});
      else
        out.push_back(second_inertia_identity_audit(uniform, p));
    } else if (name == "virial-inequality") {
      out.push_back(virial_inequality_audit(series, p, m.scenario.hooks.self_force));
    } else if (name == "expansion") {
      if (series.size() < 2 || !initial)
        out.push_back({name, AuditStatus::inconclusive, "no evolution recorded"});
      else
        out.push_back(expansion_audit(series, *initial, p));
    } else if (name == "hoelder") {
      out.push_back(hoelder_audit(series, p));
    } else if (name == "collapse-scaling") {
      const auto fit = collapse_scaling(collapse_epsilons, series.front().M, p, collapse_grid(p.N()));
      out.push_back(collapse_scaling_audit(fit, p));
    }
  }
  return out;
}

/// Executes one manifest, streaming CSV rows to `csv` when given.
inline RunOutcome execute(const RunManifest& manifest, std::ostream* csv = nullptr) {
  RunOutcome o;
  o.manifest = manifest;
  if (csv) *csv << csv_header << '\n';
  const auto result = run(manifest.scenario, [&](const DiagnosticsRecord& r, const FluidState&) {
    o.series.push_back(r);
    if (csv) *csv << csv_row(r) << '\n';
  });
  o.reason = result.reason;
  o.message = result.message;
  o.last_valid_time = result.last_valid_time;
  const auto& p = manifest.scenario.params;
  if (!o.series.empty() && o.series.front().M > 0.0) {
    const double omega0 = o.series.front().omega_volume;
    o.initial_bounds = expansion_bounds(o.series.front(), p, omega0);
    o.final_bounds = expansion_bounds(o.series.back(), p, omega0);
  }
  if (o.completed()) o.verdicts = run_audits(manifest, o.series, o.initial_bounds);
  return o;
}

inline std::string format_bounds(const BoundReport& b, const std::string& prefix = "") {
  std::string out;
  out += fmt::format("{}bound_n3 = {}\n", prefix, format_optional(b.bound_n3));
  out += fmt::format("{}bound_n2 = {}\n", prefix, format_optional(b.bound_n2));
  out += fmt::format("{}bound_pressure = {}\n", prefix, format_optional(b.bound_pressure));
  out += fmt::format("{}bound_damped = {}\n", prefix, format_optional(b.bound_damped));
  out += fmt::format("{}observed_ratio_t = {:.17g}\n", prefix, b.observed_ratio_t);
  out += fmt::format("{}observed_ratio_sqrt_t = {:.17g}\n", prefix, b.observed_ratio_sqrt_t);
  out += fmt::format("{}omega_reference = {:.17g}\n", prefix, b.omega_reference);
  out += fmt::format("{}omega_current = {:.17g}\n", prefix, b.omega_current);
  out += fmt::format("{}hoelder_lhs = {:.17g}\n", prefix, b.hoelder_lhs);
  out += fmt::format("{}hoelder_rhs = {:.17g}\n", prefix, b.hoelder_rhs);
  out += fmt::format("{}hoelder_holds = {}\n", prefix, b.hoelder_holds);
  return out;
}

inline std::string format_report(const RunOutcome& o) {
  const auto& p = o.manifest.scenario.params;
  std::string out;
  out += fmt::format("epr run report: {}\n", o.manifest.name);
  out += fmt::format("termination: {}\n", to_string(o.reason));
  if (!o.message.empty()) out += fmt::format("message: {}\n", o.message);
  out += fmt::format("last valid time: {:.17g}\n", o.last_valid_time);
  out += fmt::format("samples: {}\n", o.series.size());
  out += fmt::format("relative mass drift: {:.3e}\n\n", o.mass_drift());

  if (o.completed()) {
    for (const auto& v : o.verdicts)
      out += fmt::format("{:<13} {}{}\n", to_string(v.status), v.name, v.detail.empty() ? "" : "  (" + v.detail + ")");
  } else {
    out += "audits not evaluated: run did not complete\n";
  }

  out += "\n[bounds t=0]\n";
  out += o.initial_bounds ? format_bounds(*o.initial_bounds) : "undefined (zero mass)\n";
  out += "\n[bounds t=end]\n";
  out += o.final_bounds ? format_bounds(*o.final_bounds) : "undefined (zero mass)\n";

  out += "\n[result]\n";
  out += fmt::format("name = {}\nN = {}\ngamma = {:.17g}\nK = {:.17g}\nbeta = {:.17g}\n", o.manifest.name, p.N(),
                     p.gamma(), p.K(), p.beta());
  out += fmt::format("termination = {}\n", to_string(o.reason));
  out += fmt::format("final_time = {:.17g}\n", o.last_valid_time);
  out += fmt::format("mass_drift = {:.17g}\n", o.mass_drift());
  for (const auto& v : o.verdicts) out += fmt::format("audit.{} = {}\n", v.name, to_string(v.status));
  out += fmt::format("status = {}\n", o.ok() ? "ok" : "failed");

  out += "\n[manifest]\n";
  out += to_config_text(o.manifest);
  return out;
}

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& out_dir, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : out_dir / p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace detail

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

/// Runs one manifest; with an output directory the CSV and report are written there.
inline CommandResult run_command(const RunManifest& manifest, const std::optional<std::filesystem::path>& out_dir) {
  std::ostringstream csv;
  const RunOutcome outcome = execute(manifest, &csv);
  const std::string report = format_report(outcome);
  if (out_dir) {
    detail::write_text(detail::resolve(*out_dir, manifest.csv_path), csv.str());
    detail::write_text(detail::resolve(*out_dir, manifest.report_path), report);
  }
  return {outcome.ok() ? 0 : 1, report};
}

/// A sweep entry: either a parsed manifest or the error raised while loading it.
struct SweepItem {
  std::string name;
  std::optional<RunManifest> manifest;
  std::string load_error;
};

struct SweepRow {
  std::string name;
  int N = 0;
  double gamma = 0.0, K = 0.0, beta = 0.0;
  std::string termination;
  std::string status;
  std::optional<BoundReport> bounds;
  double ratio_t = 0.0, ratio_sqrt_t = 0.0;
  std::string audits;
  std::string error;
};

inline SweepRow sweep_row(const SweepItem& item, const std::optional<std::filesystem::path>& out_dir) {
  SweepRow row;
  row.name = item.name;
  if (!item.manifest) {
    row.termination = "config-error";
    row.status = "failed";
    row.error = item.load_error;
    return row;
  }
  const auto& p = item.manifest->scenario.params;
  row.N = p.N();
  row.gamma = p.gamma();
  row.K = p.K();
  row.beta = p.beta();
  try {
    std::ostringstream csv;
    const RunOutcome o = execute(*item.manifest, &csv);
    if (out_dir) {
      detail::write_text(detail::resolve(*out_dir, item.manifest->csv_path), csv.str());
      detail::write_text(detail::resolve(*out_dir, item.manifest->report_path), format_report(o));
    }
    row.termination = to_string(o.reason);
    row.status = o.ok() ? "ok" : "failed";
    row.bounds = o.initial_bounds;
    if (o.final_bounds) {
      row.ratio_t = o.final_bounds->observed_ratio_t;
      row.ratio_sqrt_t = o.final_bounds->observed_ratio_sqrt_t;
    }
    for (const auto& v : o.verdicts)
      row.audits += fmt::format("{}{}={}", row.audits.empty() ? "" : ";", v.name, to_string(v.status));
    if (!o.completed()) row.error = o.message;
  } catch (const std::exception& e) {
    row.termination = "error";
    row.status = "failed";
    row.error = e.what();
  }
  return row;
}

inline std::string format_sweep(std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.N, a.gamma, a.K, a.beta, a.name) < std::tie(b.N, b.gamma, b.K, b.beta, b.name);
  });
  std::string out =
      "N,gamma,K,beta,name,termination,status,bound_n3,bound_n2,bound_pressure,bound_damped,R_over_t,"
      "R_over_sqrt_t,audits,error\n";
  for (const auto& r : rows) {
    const auto bound = [&](std::optional<double> BoundReport::*field) {
      return r.bounds ? format_optional((*r.bounds).*field) : std::string("absent");
    };
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{},{},{},{},{},{},{},{:.17g},{:.17g},{},{}\n", r.N, r.gamma, r.K,
                       r.beta, r.name, r.termination, r.status, bound(&BoundReport::bound_n3),
                       bound(&BoundReport::bound_n2), bound(&BoundReport::bound_pressure),
                       bound(&BoundReport::bound_damped), r.ratio_t, r.ratio_sqrt_t, r.audits, error);
  }
  return out;
}

/// Runs every item on up to `workers` threads; the aggregate is sorted by
/// (N, gamma, K, beta, name) and does not depend on the worker count.
inline CommandResult sweep_command(const std::vector<SweepItem>& items, int workers,
                                   const std::optional<std::filesystem::path>& out_dir) {
  if (items.empty()) throw ContractError("sweep_command: at least one manifest required");
  if (workers < 1) throw ContractError("sweep_command: workers >= 1 required");
  std::vector<SweepRow> rows(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < items.size(); k = next++) rows[k] = sweep_row(items[k], out_dir);
  };
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), items.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const std::string aggregate = format_sweep(rows);
  if (out_dir) detail::write_text(*out_dir / "aggregate.csv", aggregate);
  const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status == "ok"; });
  return {all_ok ? 0 : 1, aggregate};
}

/// Every *.ini file in `dir`, in name order, named after the file stem.
inline std::vector<SweepItem> load_sweep_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ini") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no .ini configurations in " + dir.string());
  std::vector<SweepItem> items;
  for (const auto& f : files) {
    SweepItem item{f.stem().string(), std::nullopt, ""};
    try {
      item.manifest = load_config(f.string(), item.name);
    } catch (const std::exception& e) {
      item.load_error = e.what();
    }
    items.push_back(std::move(item));
  }
  return items;
}

/// BoundReport and blow-up data of the initial state, without evolving it.
inline CommandResult bounds_command(const RunManifest& manifest) {
  const FluidState state = init_scenario(manifest.scenario);
  const DiagnosticsRecord record = make_record(state);
  std::string out = fmt::format("epr bounds: {}\n", manifest.name);
  out += fmt::format("M = {:.17g}\nE = {:.17g}\nR_support = {:.17g}\nomega_volume = {:.17g}\n", record.M, record.E,
                     record.R_support, record.omega_volume);
  if (!(record.M > 0.0)) {
    out += "bounds undefined for zero mass\n";
    return {0, out};
  }
  out += format_bounds(expansion_bounds(record, manifest.scenario.params, record.omega_volume));
  const double h0 = h0_functional(state);
  out += fmt::format("H0 = {:.17g}\n", h0);
  const auto T = record.R_support > 0.0 ? blowup_time(record.R_support, h0) : std::nullopt;
  out += fmt::format("blowup_time_bound = {}\n", format_optional(T));
  return {0, out};
}

inline CommandResult emden_command(double R0, double M, int N, double t_end, int samples = 200,
                                   double tol = 1e-8) {
  const auto trajectory = integrate_emden({R0, 0.0, M, N}, t_end, tol, samples);
  std::string out = "t,R,Rdot\n";
  for (const auto& pt : trajectory) out += fmt::format("{:.17g},{:.17g},{:.17g}\n", pt.t, pt.R, pt.Rdot);
  return {0, out};
}

}  // namespace epr
