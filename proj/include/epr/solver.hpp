#pragma once

// Finite-volume evolution of the radial Euler-Poisson system with repulsive
// self-force. One step is split as
//   half kick  V += dt/2 Phi_r[rho^n]
//   transport  (HLL + limited linear reconstruction, two-stage SSP Runge-Kutta,
//               shell-volume form with the (N-1)P/r source)
//   half kick  V += dt/2 Phi_r[rho^{n+1}]
//   damping    V *= exp(-beta dt)
// The time step obeys both the wave CFL limit and an acceleration limit
// cfl * sqrt(dr / max Phi_r).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "epr/diagnostics.hpp"
#include "epr/errors.hpp"
#include "epr/poisson.hpp"
#include "epr/state.hpp"

namespace epr {

namespace detail {

/// Monotonized-central limited slope. Next to a vacuum cell it drives the
/// outer face value to zero, which keeps free boundaries sharp.
inline double monotonized_central(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::copysign(std::min({2.0 * std::abs(a), 2.0 * std::abs(b), 0.5 * std::abs(a + b)}), a);
}

struct FaceFlux {
  double mass;
  double momentum;
};

inline FaceFlux hll_flux(double rho_l, double v_l, double rho_r, double v_r, const PhysicsParams& p) {
  const double c_l = sound_speed(rho_l, p);
  const double c_r = sound_speed(rho_r, p);
  const double p_l = pressure(rho_l, p);
  const double p_r = pressure(rho_r, p);
  const FaceFlux f_l{rho_l * v_l, rho_l * v_l * v_l + p_l};
  const FaceFlux f_r{rho_r * v_r, rho_r * v_r * v_r + p_r};
  const double s_l = std::min(v_l - c_l, v_r - c_r);
  const double s_r = std::max(v_l + c_l, v_r + c_r);
  if (s_l >= 0.0) return f_l;
  if (s_r <= 0.0) return f_r;
  const double inv = 1.0 / (s_r - s_l);
  return {(s_r * f_l.mass - s_l * f_r.mass + s_l * s_r * (rho_r - rho_l)) * inv,
          (s_r * f_l.momentum - s_l * f_r.momentum + s_l * s_r * (rho_r * v_r - rho_l * v_l)) * inv};
}

/// Forward-Euler transport update of (rho, rho V) over dt, in place.
inline void transport_stage(const SolverContext& ctx, std::vector<double>& rho,
                            std::vector<double>& momentum, double dt) {
  const auto& p = ctx.params;
  const std::size_t n = rho.size();
  const auto area = ctx.grid.edge_areas();
  const auto vol = ctx.grid.volumes();

  // Primitive variables with two reflective ghost cells at each wall.
  const std::size_t g = 2;
  std::vector<double> d(n + 2 * g), v(n + 2 * g);
  for (std::size_t i = 0; i < n; ++i) {
    d[i + g] = rho[i];
    v[i + g] = rho[i] > ctx.density_floor ? momentum[i] / rho[i] : 0.0;
  }
  for (std::size_t k = 0; k < g; ++k) {
    d[g - 1 - k] = d[g + k];
    v[g - 1 - k] = -v[g + k];
    d[n + g + k] = d[n + g - 1 - k];
    v[n + g + k] = -v[n + g - 1 - k];
  }

  // Limited slopes (per cell, difference across one cell) for cells -1..n.
  std::vector<double> sd(n + 2 * g, 0.0), sv(n + 2 * g, 0.0);
  for (std::size_t j = 1; j + 1 < n + 2 * g; ++j) {
    sd[j] = monotonized_central(d[j] - d[j - 1], d[j + 1] - d[j]);
        sv[j] = monotonized_central(v[j] - v[j - 1], v[j + 1] - v[j]);
  }

  // Face f sits between cells f-1 and f (f = 0 is the origin, f = n the wall).
  std::vector<FaceFlux> flux(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const std::size_t jl = f + g - 1, jr = f + g;
    flux[f] = hll_flux(d[jl] + 0.5 * sd[jl], v[jl] + 0.5 * sv[jl], d[jr] - 0.5 * sd[jr],
                       v[jr] - 0.5 * sv[jr], p);
  }
  // Area-weighted fluxes; the wall faces carry no mass.
  std::vector<double> fm(n + 1), fp(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    fm[f] = (f == 0 || f == n) ? 0.0 : area[f] * flux[f].mass;
    fp[f] = area[f] * flux[f].momentum;
  }

  // Positivity: scale the outflow of any cell that would be over-drained.
  std::vector<double> theta(n, 1.0);
  bool limited = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double out = dt * (std::max(fm[i + 1], 0.0) + std::max(-fm[i], 0.0));
    const double available = rho[i] * vol[i];
    if (out > available) {
      theta[i] = out > 0.0 ? available / out : 1.0;
      limited = true;
    }
  }
  if (limited) {
    for (std::size_t f = 1; f < n; ++f) {
      const double t = fm[f] > 0.0 ? theta[f - 1] : theta[f];
      fm[f] *= t;
      fp[f] *= t;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double geometric = pressure(rho[i], p) * (area[i + 1] - area[i]);
    const double new_mass = rho[i] * vol[i] - dt * (fm[i + 1] - fm[i]);
    const double new_mom = momentum[i] * vol[i] - dt * (fp[i + 1] - fp[i] - geometric);
    rho[i] = std::max(new_mass, 0.0) / vol[i];
    momentum[i] = new_mom / vol[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (rho[i] <= ctx.density_floor) momentum[i] = 0.0;
}

inline bool all_finite(const FluidState& s) {
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    if (!std::isfinite(s.rho[i]) || !std::isfinite(s.velocity[i])) return false;
  return true;
}

}  // namespace detail

/// CFL step cfl * dr / max(|V| + c) over non-vacuum cells.
inline double compute_dt(const FluidState& state) {
  const auto& ctx = *state.context;
  double speed = 0.0;
  for (std::size_t i = 0; i < state.rho.size(); ++i) {
    if (state.rho[i] <= ctx.density_floor) continue;
    speed = std::max(speed, std::abs(state.velocity[i]) + sound_speed(state.rho[i], ctx.params));
  }
  const double dr = ctx.grid.dr();
  double dt = speed > 0.0 ? ctx.cfl_number * dr / speed : ctx.cfl_number * dr;
  if (ctx.hooks.self_force) {
    const auto phi_r = force_field(state.rho, ctx.grid, ctx.params);
    double accel = 0.0;
    for (std::size_t i = 0; i < state.rho.size(); ++i)
      if (state.rho[i] > ctx.density_floor) accel = std::max(accel, phi_r[i]);
    if (accel > 0.0) dt = std::min(dt, ctx.cfl_number * std::sqrt(dr / accel));
  }
  return dt;
}

inline FluidState step(const FluidState& state, double dt) {
  const auto& ctx = *state.context;
  if (!(dt >= 0.0)) throw ContractError("step: dt must be >= 0");
  const double limit = compute_dt(state);
  if (dt > limit * (1.0 + 1e-12))
    throw ContractError("step: dt = " + std::to_string(dt) + " violates the CFL limit " +
                        std::to_string(limit));
  const std::size_t n = state.rho.size();

  std::vector<double> rho = state.rho;
  std::vector<double> mom(n);
  for (std::size_t i = 0; i < n; ++i) mom[i] = rho[i] > ctx.density_floor ? rho[i] * state.velocity[i] : 0.0;

  // Half kick with the field of the old density.
  if (ctx.hooks.self_force) {
    const auto phi_r = force_field(rho, ctx.grid, ctx.params);
    for (std::size_t i = 0; i < n; ++i)
      if (rho[i] > ctx.density_floor) mom[i] += 0.5 * dt * rho[i] * phi_r[i];
  }

  if (ctx.hooks.transport) {
    std::vector<double> rho1 = rho, mom1 = mom;
    detail::transport_stage(ctx, rho1, mom1, dt);
    std::vector<double> rho2 = rho1, mom2 = mom1;
    detail::transport_stage(ctx, rho2, mom2, dt);
    for (std::size_t i = 0; i < n; ++i) {
      rho[i] = 0.5 * (rho[i] + rho2[i]);
      mom[i] = 0.5 * (mom[i] + mom2[i]);
    }
  }

  FluidState next = state;
  next.time = state.time + dt;
  next.step_count = state.step_count + 1;
  next.rho = std::move(rho);
  for (std::size_t i = 0; i < n; ++i)
    next.velocity[i] = next.rho[i] > ctx.density_floor ? mom[i] / next.rho[i] : 0.0;

  // Half kick with the field of the transported density.
  if (ctx.hooks.self_force) {
    const auto phi_r = force_field(next.rho, ctx.grid, ctx.params);
    for (std::size_t i = 0; i < n; ++i)
      if (next.rho[i] > ctx.density_floor) next.velocity[i] += 0.5 * dt * phi_r[i];
  }

  if (ctx.params.beta() > 0.0) {
    const double decay = std::exp(-ctx.params.beta() * dt);
    for (double& v : next.velocity) v *= decay;
  }

  if (ctx.hooks.inject_nan_at_step && *ctx.hooks.inject_nan_at_step == next.step_count)
    next.rho[0] = std::numeric_limits<double>::quiet_NaN();
  if (!detail::all_finite(next))
    throw NumericFailure("non-finite state after step " + std::to_string(next.step_count),
                         state.time);
  return next;
}

enum class Termination { completed, support_escaped, numeric_failure };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::support_escaped: return "support-escaped";
    case Termination::numeric_failure: return "numeric-failure";
  }
  return "unknown";
}

struct RunResult {
  FluidState final_state;
  Termination reason = Termination::completed;
  double last_valid_time = 0.0;
  std::string message;
};

using RecordSink = std::function<void(const DiagnosticsRecord&, const FluidState&)>;

/// True when density above the support threshold sits in the outer two cells.
inline bool support_escaped(const FluidState& s) {
  const std::size_t n = s.rho.size();
  return s.rho[n - 1] > s.context->support_threshold || s.rho[n - 2] > s.context->support_threshold;
}

/// Output times k * output_every below t_end, followed by t_end itself.
inline std::vector<double> output_schedule(double t_end, double output_every) {
  std::vector<double> times;
  for (long k = 1;; ++k) {
    const double t = k * output_every;
    if (t >= t_end - 1e-9 * output_every) break;
    times.push_back(t);
  }
  if (t_end > 0.0) times.push_back(t_end);
  return times;
}

inline RunResult run(const ScenarioConfig& config, const RecordSink& sink) {
  RunResult result;
  FluidState state = init_scenario(config);
  auto emit = [&](const FluidState& s) {
    if (sink) sink(make_record(s), s);
  };
  emit(state);
  result.last_valid_time = 0.0;

  for (const double target : output_schedule(config.t_end, config.output_every)) {
    while (state.time < target) {
      double dt = compute_dt(state);
      bool lands = false;
      if (state.time + dt >= target - 1e-12 * std::max(1.0, target)) {
        dt = std::min(dt, target - state.time);
        lands = true;
      }
      try {
        state = step(state, dt);
      } catch (const NumericFailure& e) {
        result.reason = Termination::numeric_failure;
        result.last_valid_time = e.last_valid_time;
        result.message = e.what();
        result.final_state = std::move(state);
        return result;
      }
      if (lands) state.time = target;
      result.last_valid_time = state.time;
      if (support_escaped(state)) {
        emit(state);
        result.reason = Termination::support_escaped;
        result.message = "support reached the outer boundary at t = " + std::to_string(state.time);
        result.final_state = std::move(state);
        return result;
      }
    }
    emit(state);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace epr
