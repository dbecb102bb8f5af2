#pragma once

// Integral functionals of a radial state: mass, energy, second inertia
// H = int rho |x|^2 and the virial right-hand side of its second derivative,
// support measures, and the sampled DiagnosticsRecord.

#include <algorithm>
#include <cmath>
#include <vector>

#include "epr/errors.hpp"
#include "epr/params.hpp"
#include "epr/poisson.hpp"
#include "epr/state.hpp"

namespace epr {

struct DiagnosticsRecord {
  double t = 0.0;
  double M = 0.0;
  double E = 0.0;
  double H = 0.0;
  double Hddot_integral = 0.0;
  double R_support = 0.0;
  double omega_volume = 0.0;
  double potential_energy = 0.0;
  double kinetic_dissipation = 0.0;
  double max_rho = 0.0;
  double max_dVdr = 0.0;

  // Not serialised; kept for the Hoelder and bound evaluations.
  double H_rate = 0.0;              // dH/dt = 2 int rho r V
  double support_mass = 0.0;        // mass inside the support cells
  double rho_gamma_integral = 0.0;  // int over the support of rho^gamma
};

inline double total_mass(const FluidState& s) {
  const auto vol = s.grid().volumes();
  double m = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) m += s.rho[i] * vol[i];
  return m;
}

inline double kinetic_energy(const FluidState& s) {
  const auto vol = s.grid().volumes();
  double k = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) k += 0.5 * s.rho[i] * s.velocity[i] * s.velocity[i] * vol[i];
  return k;
}

inline double internal_energy(const FluidState& s) {
  const auto& p = s.params();
  if (p.pressureless()) return 0.0;
  if (p.gamma() == 1.0) throw DomainError("energy: gamma = 1 with K > 0 is not supported");
  const auto vol = s.grid().volumes();
  double e = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) e += pressure(s.rho[i], p) * vol[i];
  return e / (p.gamma() - 1.0);
}

/// -1/2 int rho Phi.
inline double potential_energy(const FluidState& s, const FieldState& field) {
  const auto vol = s.grid().volumes();
  double w = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) w -= 0.5 * s.rho[i] * field.phi[i] * vol[i];
  return w;
}

inline double energy(const FluidState& s, const FieldState& field) {
  return kinetic_energy(s) + internal_energy(s) + potential_energy(s, field);
}

/// beta int rho |u|^2, the dissipation rate of the energy.
inline double kinetic_dissipation(const FluidState& s) {
  return 2.0 * s.params().beta() * kinetic_energy(s);
}

inline double second_inertia(const FluidState& s) {
  const auto vol = s.grid().volumes();
  const auto rc = s.grid().centers();
  double h = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) h += s.rho[i] * rc[i] * rc[i] * vol[i];
  return h;
}

inline double second_inertia_rate(const FluidState& s) {
  const auto vol = s.grid().volumes();
  const auto rc = s.grid().centers();
  double h = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) h += 2.0 * s.rho[i] * rc[i] * s.velocity[i] * vol[i];
  return h;
}

/// 2{ int (rho|u|^2 + N P) - (N-2)/2 int rho Phi } for N >= 3, and
/// 2 int (rho|u|^2 + 2P) + M^2 for N = 2. Valid for any beta; with beta > 0
/// it is the forcing of H'' + beta H' rather than H'' itself.
inline double virial_bracket(const FluidState& s, const FieldState& field) {
  const auto& p = s.params();
  const int n = p.N();
  const auto vol = s.grid().volumes();
  double flow = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    flow += (s.rho[i] * s.velocity[i] * s.velocity[i] + n * pressure(s.rho[i], p)) * vol[i];
  if (n == 2) {
    const double m = s.context->hooks.self_force ? total_mass(s) : 0.0;
    return 2.0 * flow + m * m;
  }
  return 2.0 * flow + (n - 2) * 2.0 * potential_energy(s, field);
}

/// Right side of the second-inertia identity; defined only without damping.
inline double hddot_integral(const FluidState& s, const FieldState& field) {
  if (s.params().beta() != 0.0)
    throw ContractError("hddot_integral: the second-inertia identity requires beta = 0");
  return virial_bracket(s, field);
}

/// Largest cell-centre radius whose density exceeds the support threshold.
inline double support_radius(const FluidState& s) {
  const auto rc = s.grid().centers();
  for (std::size_t i = s.rho.size(); i-- > 0;)
    if (s.rho[i] > s.context->support_threshold) return rc[i];
  return 0.0;
}

/// N-dimensional measure of the above-threshold cells.
inline double omega_volume(const FluidState& s) {
  const auto vol = s.grid().volumes();
  double w = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    if (s.rho[i] > s.context->support_threshold) w += vol[i];
  return w;
}

inline double max_velocity_gradient(const FluidState& s) {
  const double dr = s.grid().dr();
  const double floor = s.context->density_floor;
  double g = 0.0;
  for (std::size_t i = 0; i + 1 < s.rho.size(); ++i)
    if (s.rho[i] > floor && s.rho[i + 1] > floor)
      g = std::max(g, std::abs(s.velocity[i + 1] - s.velocity[i]) / dr);
  return g;
}

inline DiagnosticsRecord make_record(const FluidState& s) {
  const FieldState field = field_of(s);
  const auto& p = s.params();
  const auto vol = s.grid().volumes();
  DiagnosticsRecord r;
  r.t = s.time;
  r.M = total_mass(s);
  r.potential_energy = potential_energy(s, field);
  r.E = kinetic_energy(s) + internal_energy(s) + r.potential_energy;
  r.H = second_inertia(s);
  r.H_rate = second_inertia_rate(s);
  r.Hddot_integral = virial_bracket(s, field);
  r.R_support = support_radius(s);
  r.omega_volume = omega_volume(s);
  r.kinetic_dissipation = kinetic_dissipation(s);
  r.max_rho = s.rho.empty() ? 0.0 : *std::max_element(s.rho.begin(), s.rho.end());
  r.max_dVdr = max_velocity_gradient(s);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (s.rho[i] > s.context->support_threshold) {
      r.support_mass += s.rho[i] * vol[i];
      r.rho_gamma_integral += std::pow(s.rho[i], p.gamma()) * vol[i];
    }
  }
  return r;
}

}  // namespace epr
