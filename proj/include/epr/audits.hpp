#pragma once

// Checks of the analytical statements against sampled time series. Every
// threshold used for a PASS/FAIL decision lives in `thresholds` below.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "epr/diagnostics.hpp"
#include "epr/errors.hpp"
#include "epr/params.hpp"
#include "epr/poisson.hpp"
#include "epr/scenario.hpp"

namespace epr {

namespace thresholds {
inline constexpr double energy_monotone_slack = 1e-4;  // x E(0), per sample
inline constexpr double energy_budget_rel = 0.05;      // beta > 0 drop vs dissipation
inline constexpr double energy_drift_rel = 1e-3;       // beta = 0 total drift
inline constexpr double inertia_identity_rel = 0.02;   // x max |H''|
inline constexpr double expansion_slack = 0.2;
inline constexpr double inequality_abs = 1e-10;
inline constexpr double hoelder_rel = 1e-12;
inline constexpr double collapse_exponent_rel = 0.1;
inline constexpr double collapse_log_r2 = 0.99;
}  // namespace thresholds

enum class AuditStatus { pass, fail, inconclusive };

inline const char* to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "PASS";
    case AuditStatus::fail: return "FAIL";
    case AuditStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct AuditVerdict {
  std::string name;
  AuditStatus status = AuditStatus::pass;
  std::string detail;

  bool ok() const { return status != AuditStatus::fail; }
};

inline double trapezoid(std::span<const DiagnosticsRecord> series, double DiagnosticsRecord::*field) {
  double sum = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k)
    sum += 0.5 * (series[k].*field + series[k - 1].*field) * (series[k].t - series[k - 1].t);
  return sum;
}

/// E non-increasing per sample; for beta > 0 the total drop matches the
/// time-integrated dissipation, for beta = 0 the drift stays small.
inline AuditVerdict energy_dissipation_audit(std::span<const DiagnosticsRecord> series, double beta) {
  if (series.size() < 3) throw ContractError("energy_dissipation_audit: at least 3 records required");
  AuditVerdict v{"energy-dissipation", AuditStatus::pass, ""};
  const double e0 = series.front().E;
  const double scale = std::abs(e0);
  std::size_t rises = 0;
  double worst = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double rise = series[k].E - series[k - 1].E;
    worst = std::max(worst, rise);
    if (rise > thresholds::energy_monotone_slack * scale) ++rises;
  }
  const double drop = e0 - series.back().E;
  bool budget_ok;
  if (beta > 0.0) {
    const double dissipated = trapezoid(series, &DiagnosticsRecord::kinetic_dissipation);
    budget_ok = std::abs(drop - dissipated) <= thresholds::energy_budget_rel * std::abs(dissipated);
    v.detail = fmt::format("drop={:.6g} integrated_dissipation={:.6g}", drop, dissipated);
  } else {
    budget_ok = std::abs(drop) <= thresholds::energy_drift_rel * scale;
    v.detail = fmt::format("drift={:.6g} E0={:.6g}", -drop, e0);
  }
  v.detail += fmt::format(" max_rise={:.3g} rises={}", worst, rises);
  v.status = (rises == 0 && budget_ok) ? AuditStatus::pass : AuditStatus::fail;
  return v;
}

/// Longest prefix of the series with uniform sample spacing.
inline std::span<const DiagnosticsRecord> uniform_prefix(std::span<const DiagnosticsRecord> series) {
  if (series.size() < 3) return series;
  const double h = series[1].t - series[0].t;
  std::size_t end = 2;
  while (end < series.size() && std::abs(series[end].t - series[end - 1].t - h) <= 1e-9 * h) ++end;
  return series.first(end);
}

/// Centred second difference of H against the virial integral.
inline AuditVerdict second_inertia_identity_audit(std::span<const DiagnosticsRecord> series,
                                                  const PhysicsParams& params) {
  if (params.beta() != 0.0)
    throw ContractError("second_inertia_identity_audit: requires beta = 0");
  if (series.size() < 5) throw ContractError("second_inertia_identity_audit: at least 5 records required");
  const double h = series[1].t - series[0].t;
  for (std::size_t k = 1; k < series.size(); ++k)
    if (std::abs(series[k].t - series[k - 1].t - h) > 1e-9 * h)
      throw ContractError("second_inertia_identity_audit: samples are not uniformly spaced");
  AuditVerdict v{"inertia-identity", AuditStatus::pass, ""};
  double scale = 0.0;
  for (const auto& r : series) scale = std::max(scale, std::abs(r.Hddot_integral));
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    const double d2 = (series[k + 1].H - 2.0 * series[k].H + series[k - 1].H) / (h * h);
    worst = std::max(worst, std::abs(d2 - series[k].Hddot_integral));
  }
  const double rel = scale > 0.0 ? worst / scale : worst;
  v.status = rel <= thresholds::inertia_identity_rel ? AuditStatus::pass : AuditStatus::fail;
  v.detail = fmt::format("max_rel_error={:.4g} max_Hddot={:.6g}", rel, scale);
  return v;
}

/// min(2, N(gamma-1), N-2).
inline double expansion_coefficient(const PhysicsParams& p) {
  return std::min({2.0, p.N() * (p.gamma() - 1.0), static_cast<double>(p.N() - 2)});
}

struct BoundReport {
  std::optional<double> bound_n3;
  std::optional<double> bound_n2;
  std::optional<double> bound_pressure;
  std::optional<double> bound_damped;
  double observed_ratio_t = 0.0;
  double observed_ratio_sqrt_t = 0.0;
  double omega_reference = 0.0;  // |Omega| used in the bounds (t = 0 support)
  double omega_current = 0.0;    // |Omega(t)| of the record
  double hoelder_lhs = 0.0;      // support mass
  double hoelder_rhs = 0.0;      // (int rho^gamma)^{1/gamma} |Omega|^{(gamma-1)/gamma}
  bool hoelder_holds = true;
};

/// Lower bounds on the support growth evaluated from one record. `omega_reference`
/// is the support measure entering the pressure bounds.
inline BoundReport expansion_bounds(const DiagnosticsRecord& record, const PhysicsParams& p,
                                    double omega_reference) {
  if (!(record.M > 0.0)) throw DomainError("expansion_bounds: undefined for M = 0");
  BoundReport b;
  const int n = p.N();
  const double g = p.gamma();
  if (n >= 3) b.bound_n3 = std::sqrt(std::max(0.0, expansion_coefficient(p) * record.E / record.M));
  if (n == 2) b.bound_n2 = std::sqrt(1.0 / (2.0 * record.M));
  const double density_factor =
      omega_reference > 0.0 ? std::pow(record.M / omega_reference, g - 1.0) : 0.0;
  b.bound_pressure = std::sqrt(n * p.K() * density_factor);
  if (p.beta() > 0.0) b.bound_damped = std::sqrt(2.0 * p.beta() * n * p.K() * density_factor);
  if (record.t > 0.0) {
    b.observed_ratio_t = record.R_support / record.t;
    b.observed_ratio_sqrt_t = record.R_support / std::sqrt(record.t);
  }
  b.omega_reference = omega_reference;
  b.omega_current = record.omega_volume;
  b.hoelder_lhs = record.support_mass;
  b.hoelder_rhs = std::pow(record.rho_gamma_integral, 1.0 / g) *
                  std::pow(record.omega_volume, (g - 1.0) / g);
  b.hoelder_holds = b.hoelder_lhs <= b.hoelder_rhs * (1.0 + thresholds::hoelder_rel);
  return b;
}

/// Finite-time proxy of the lim-inf growth bounds, evaluated at the last
/// record. `initial` holds the bounds computed from the t = 0 record.
inline AuditVerdict expansion_audit(std::span<const DiagnosticsRecord> series, const BoundReport& initial,
                                    const PhysicsParams& p) {
  if (series.size() < 2) throw ContractError("expansion_audit: at least 2 records required");
  AuditVerdict v{"expansion", AuditStatus::pass, ""};
  const auto& first = series.front();
  const auto& last = series.back();
  const double keep = 1.0 - thresholds::expansion_slack;
  const bool damped = p.beta() > 0.0;

  std::vector<std::pair<std::string, double>> bounds;
  if (damped) {
    if (initial.bound_damped) bounds.emplace_back("bound_damped", *initial.bound_damped);
  } else {
    if (initial.bound_n3) bounds.emplace_back("bound_n3", *initial.bound_n3);
    if (initial.bound_n2) bounds.emplace_back("bound_n2", *initial.bound_n2);
    if (initial.bound_pressure) bounds.emplace_back("bound_pressure", *initial.bound_pressure);
  }
  double strongest = 0.0;
  for (const auto& [_, value] : bounds) strongest = std::max(strongest, value);

  const double t = last.t;
  const double ratio = t > 0.0 ? (damped ? last.R_support / std::sqrt(t) : last.R_support / t) : 0.0;
  // The run is long enough once a support that merely doubled would already
  // sit below the bound, so that passing requires real growth.
  const double growth = damped ? std::sqrt(t) : t;
  const bool doubled = last.R_support >= 2.0 * first.R_support && first.R_support > 0.0;
  const bool long_enough = strongest > 0.0 && keep * strongest * growth >= 2.0 * first.R_support;
  if (!doubled && !long_enough) {
    v.status = AuditStatus::inconclusive;
    v.detail = fmt::format("run too short: R(t_end)={:.6g} < 2 R(0)={:.6g}", last.R_support,
                           2.0 * first.R_support);
    return v;
  }
  v.status = AuditStatus::pass;
  v.detail = fmt::format("{}={:.6g}", damped ? "R/sqrt(t)" : "R/t", ratio);
  for (const auto& [name, value] : bounds) {
    v.detail += fmt::format(" {}={:.6g}", name, value);
    if (ratio < keep * value) v.status = AuditStatus::fail;
  }
  return v;
}

/// H''-integral >= 2 min(2, N(gamma-1), N-2) E (N >= 3) or >= M^2 (N = 2) on every sample.
inline AuditVerdict virial_inequality_audit(std::span<const DiagnosticsRecord> series,
                                            const PhysicsParams& p, bool self_force = true) {
  AuditVerdict v{"virial-inequality", AuditStatus::pass, ""};
  std::size_t violations = 0;
  double worst = 0.0;
  for (const auto& r : series) {
    const double lower = p.N() >= 3 ? 2.0 * expansion_coefficient(p) * r.E
                                    : (self_force ? r.M * r.M : 0.0);
    const double gap = r.Hddot_integral - lower;
    worst = std::min(worst, gap);
    if (gap < -thresholds::inequality_abs) ++violations;
  }
  v.status = violations == 0 ? AuditStatus::pass : AuditStatus::fail;
  v.detail = fmt::format("violations={} min_gap={:.3g}", violations, worst);
  return v;
}

/// Hoelder inequality M <= (int rho^gamma)^{1/gamma} |Omega|^{(gamma-1)/gamma} on every record.
inline AuditVerdict hoelder_audit(std::span<const DiagnosticsRecord> series, const PhysicsParams& p) {
  AuditVerdict v{"hoelder", AuditStatus::pass, ""};
  std::size_t violations = 0;
  double tightest = 0.0;
  for (const auto& r : series) {
    if (!(r.M > 0.0)) continue;
    const auto b = expansion_bounds(r, p, r.omega_volume);
    if (!b.hoelder_holds) ++violations;
    if (b.hoelder_rhs > 0.0) tightest = std::max(tightest, b.hoelder_lhs / b.hoelder_rhs);
  }
  v.status = violations == 0 ? AuditStatus::pass : AuditStatus::fail;
  v.detail = fmt::format("violations={} max_ratio={:.12g}", violations, tightest);
  return v;
}

/// -int rho_eps Phi[rho_eps] for the mass-normalised bump of width epsilon.
inline double collapse_indicator(double epsilon, double mass, const PhysicsParams& params,
                                 const RadialGrid& grid) {
  if (!(epsilon > 0.0)) throw DomainError("collapse_indicator: epsilon must be > 0");
  if (epsilon < 8.0 * grid.dr())
    throw ContractError("collapse_indicator: epsilon is resolved by fewer than 8 cells");
  if (epsilon >= grid.r_max()) throw ContractError("collapse_indicator: epsilon must be < r_max");
  if (mass == 0.0) return 0.0;
  const auto rho = concentration_density(grid, epsilon, mass);
  const auto field = solve_field(rho, grid, params);
  const auto vol = grid.volumes();
  double w = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) w -= rho[i] * field.phi[i] * vol[i];
  return w;
}

struct CollapseScaling {
  std::vector<double> epsilons;
  std::vector<double> values;
  double slope = 0.0;      // d log(value)/d log(eps) for N >= 3, d value/d log(eps) for N = 2
  double r_squared = 0.0;  // of the same least-squares line
};

inline CollapseScaling collapse_scaling(std::span<const double> epsilons, double mass,
                                        const PhysicsParams& params, const RadialGrid& grid) {
  if (epsilons.size() < 2) throw ContractError("collapse_scaling: at least 2 epsilon levels required");
  CollapseScaling out;
  std::vector<double> x, y;
  for (double eps : epsilons) {
    const double w = collapse_indicator(eps, mass, params, grid);
    out.epsilons.push_back(eps);
    out.values.push_back(w);
    x.push_back(std::log(eps));
    y.push_back(params.N() >= 3 ? std::log(w) : w);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  out.slope = sxy / sxx;
  out.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return out;
}

inline AuditVerdict collapse_scaling_audit(const CollapseScaling& fit, const PhysicsParams& p) {
  AuditVerdict v{"collapse-scaling", AuditStatus::pass, ""};
  if (p.N() >= 3) {
    const double expected = -(p.N() - 2.0);
    const bool ok = std::abs(fit.slope - expected) <= thresholds::collapse_exponent_rel * std::abs(expected);
    v.status = ok ? AuditStatus::pass : AuditStatus::fail;
    v.detail = fmt::format("exponent={:.6g} expected={:.6g}", fit.slope, expected);
  } else {
    const bool ok = fit.r_squared >= thresholds::collapse_log_r2 && fit.slope < 0.0;
    v.status = ok ? AuditStatus::pass : AuditStatus::fail;
    v.detail = fmt::format("log_slope={:.6g} r_squared={:.6g}", fit.slope, fit.r_squared);
  }
  return v;
}

}  // namespace epr
