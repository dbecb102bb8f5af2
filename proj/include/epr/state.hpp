#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "epr/grid.hpp"
#include "epr/params.hpp"
#include "epr/poisson.hpp"
#include "epr/scenario.hpp"

namespace epr {

/// Everything about a run that does not change between steps.
struct SolverContext {
  RadialGrid grid;
  PhysicsParams params;
  double cfl_number;
  double density_floor;      // absolute; cells at or below are vacuum
  double support_threshold;  // absolute; cells above belong to the support
  double reference_mass;     // mass of the sampled initial state
  double reference_max_rho;  // max rho at t = 0
  SolverHooks hooks;
};

/// Density and radial velocity (u = (x/r) V) per cell at one time.
struct FluidState {
  double time = 0.0;
  std::int64_t step_count = 0;
  std::vector<double> rho;
  std::vector<double> velocity;
  std::shared_ptr<const SolverContext> context;

  const RadialGrid& grid() const { return context->grid; }
  const PhysicsParams& params() const { return context->params; }
};

/// Field consistent with the state's coupling switch.
inline FieldState field_of(const FluidState& state) {
  if (!state.context->hooks.self_force) return zero_field(state.grid());
  return solve_field(state.rho, state.grid(), state.params());
}

inline std::shared_ptr<const SolverContext> make_context(const ScenarioConfig& config,
                                                         std::span<const double> rho0) {
  RadialGrid grid(config.n_cells, config.r_max, config.params.N());
  double mass = 0.0;
  const auto volumes = grid.volumes();
  for (std::size_t i = 0; i < grid.size(); ++i) mass += rho0[i] * volumes[i];
  const double max_rho = rho0.empty() ? 0.0 : *std::max_element(rho0.begin(), rho0.end());
  return std::make_shared<const SolverContext>(SolverContext{
      std::move(grid), config.params, config.cfl_number, config.density_floor_ratio * max_rho,
      config.support_threshold_ratio * max_rho, mass, max_rho, config.hooks});
}

/// t = 0 state with the configured profiles sampled at cell centres.
inline FluidState init_scenario(const ScenarioConfig& config) {
  config.validate();
  const RadialGrid grid(config.n_cells, config.r_max, config.params.N());
  FluidState state;
  state.rho = sample_density(config.density, grid);
  state.velocity = sample_velocity(config.velocity, grid, state.rho);
  state.context = make_context(config, state.rho);
  return state;
}

/// Replaces the fluid arrays of `state` while keeping its context.
inline FluidState with_fields(const FluidState& state, std::vector<double> rho,
                              std::vector<double> velocity) {
  FluidState out = state;
  out.rho = std::move(rho);
  out.velocity = std::move(velocity);
  return out;
}

}  // namespace epr
