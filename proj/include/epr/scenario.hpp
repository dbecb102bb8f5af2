#pragma once

// Initial data descriptors and run settings for one simulation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "epr/errors.hpp"
#include "epr/grid.hpp"
#include "epr/params.hpp"

namespace epr {

struct UniformBall {
  double rho0 = 1.0;
  double radius = 1.0;
};

/// rho = rho_center (1 - r^2/R^2) on [0, R].
struct ParabolicCap {
  double rho_center = 1.0;
  double radius = 1.0;
};

/// Mass-normalised bump of width epsilon; the family whose epsilon -> 0
/// limit is a point mass.
struct Concentration {
  double epsilon = 0.1;
  double mass = 1.0;
};

using DensityProfile = std::variant<UniformBall, ParabolicCap, Concentration>;

struct ZeroVelocity {};
struct LinearVelocity {
  double slope = 0.0;  // V = slope * r on the support
};
/// Piecewise-linear V(r) through (r, V) knots, clamped outside the table.
struct TabulatedVelocity {
  std::vector<std::pair<double, double>> knots;
};

using VelocityProfile = std::variant<ZeroVelocity, LinearVelocity, TabulatedVelocity>;

/// Switches used by tests to isolate sub-steps.
struct SolverHooks {
  bool transport = true;   // hyperbolic sub-step
  bool self_force = true;  // Poisson coupling (also zeroes Phi in diagnostics)
  std::optional<std::int64_t> inject_nan_at_step;
};

struct ScenarioConfig {
  PhysicsParams params;
  int n_cells = 512;
  double r_max = 4.0;
  DensityProfile density = UniformBall{};
  VelocityProfile velocity = ZeroVelocity{};
  double t_end = 1.0;
  double cfl_number = 0.5;
  double output_every = 0.1;
  double density_floor_ratio = 1e-12;
  double support_threshold_ratio = 1e-8;
  SolverHooks hooks;

  void validate() const;
};

inline double profile_radius(const DensityProfile& profile) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Concentration>)
          return p.epsilon;
        else
          return p.radius;
      },
      profile);
}

inline void ScenarioConfig::validate() const {
  if (n_cells < 8) throw ConfigError("grid: cells >= 8 required");
  if (!(r_max > 0.0)) throw ConfigError("grid: r_max > 0 required");
  if (!(t_end >= 0.0)) throw ConfigError("run: t_end >= 0 required");
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) throw ConfigError("run: cfl in (0, 1] required");
  if (!(output_every > 0.0)) throw ConfigError("run: output_every > 0 required");
  if (!(density_floor_ratio > 0.0 && density_floor_ratio < 1.0))
    throw ConfigError("run: density_floor_ratio in (0, 1) required");
  if (!(support_threshold_ratio > 0.0 && support_threshold_ratio < 1.0))
    throw ConfigError("run: support_threshold_ratio in (0, 1) required");
  if (params.gamma() == 1.0 && params.K() > 0.0)
    throw ConfigError("params: gamma = 1 requires K = 0 (energy undefined for isothermal pressure)");
  const double radius = profile_radius(density);
  if (!(radius > 0.0)) throw ConfigError("initial: profile radius > 0 required");
  if (!(radius < r_max)) throw ConfigError("initial: profile radius < r_max required");
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniformBall>) {
          if (!(p.rho0 >= 0.0)) throw ConfigError("initial: rho0 >= 0 required");
        } else if constexpr (std::is_same_v<T, ParabolicCap>) {
          if (!(p.rho_center >= 0.0)) throw ConfigError("initial: rho_center >= 0 required");
        } else {
          if (!(p.mass >= 0.0)) throw ConfigError("initial: mass >= 0 required");
        }
      },
      density);
  if (const auto* table = std::get_if<TabulatedVelocity>(&velocity)) {
    if (table->knots.empty()) throw ConfigError("initial: velocity table must not be empty");
    for (std::size_t i = 1; i < table->knots.size(); ++i)
      if (!(table->knots[i].first > table->knots[i - 1].first))
        throw ConfigError("initial: velocity table radii must be strictly increasing");
  }
}

/// Bump rho ~ (1 - r^2/eps^2)^2 on [0, eps), scaled so that the discrete
/// mass on `grid` equals `mass` exactly.
inline std::vector<double> concentration_density(const RadialGrid& grid, double epsilon, double mass) {
  const auto centers = grid.centers();
  const auto volumes = grid.volumes();
  std::vector<double> rho(grid.size(), 0.0);
  double raw_mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = centers[i] / epsilon;
    if (x < 1.0) {
      rho[i] = (1.0 - x * x) * (1.0 - x * x);
      raw_mass += rho[i] * volumes[i];
    }
  }
  const double scale = raw_mass > 0.0 ? mass / raw_mass : 0.0;
  for (double& value : rho) value *= scale;
  return rho;
}

/// Samples the density profile at cell centres.
inline std::vector<double> sample_density(const DensityProfile& profile, const RadialGrid& grid) {
  const auto centers = grid.centers();
  return std::visit(
      [&](const auto& p) -> std::vector<double> {
        using T = std::decay_t<decltype(p)>;
        std::vector<double> rho(grid.size(), 0.0);
        if constexpr (std::is_same_v<T, UniformBall>) {
          for (std::size_t i = 0; i < grid.size(); ++i)
            if (centers[i] < p.radius) rho[i] = p.rho0;
        } else if constexpr (std::is_same_v<T, ParabolicCap>) {
          for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = centers[i] / p.radius;
            if (x < 1.0) rho[i] = p.rho_center * (1.0 - x * x);
          }
        } else {
          rho = concentration_density(grid, p.epsilon, p.mass);
        }
        return rho;
      },
      profile);
}

inline double interpolate_table(const TabulatedVelocity& table, double r) {
  const auto& k = table.knots;
  if (r <= k.front().first) return k.front().second;
  if (r >= k.back().first) return k.back().second;
  const auto hi = std::upper_bound(k.begin(), k.end(), r,
                                   [](double value, const auto& knot) { return value < knot.first; });
  const auto lo = hi - 1;
  const double w = (r - lo->first) / (hi->first - lo->first);
  return (1.0 - w) * lo->second + w * hi->second;
}

/// Samples V at cell centres, zero outside the initial support.
inline std::vector<double> sample_velocity(const VelocityProfile& profile, const RadialGrid& grid,
                                           std::span<const double> rho) {
  const auto centers = grid.centers();
  std::vector<double> velocity(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(rho[i] > 0.0)) continue;
    const double r = centers[i];
    velocity[i] = std::visit(
        [&](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ZeroVelocity>)
            return 0.0;
          else if constexpr (std::is_same_v<T, LinearVelocity>)
            return p.slope * r;
          else
            return interpolate_table(p, r);
        },
        profile);
  }
  return velocity;
}

}  // namespace epr
