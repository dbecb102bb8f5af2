#pragma once

// Radial reduction of the Poisson equation. With rho piecewise constant on
// the cells, the enclosed moment m(r) = int_0^r rho s^{N-1} ds is exact, the
// outward force is Phi_r = alpha(N) m(r) / r^{N-1}, and the potential follows
// by integrating Phi_r inward from an exterior-solution anchor at r_max.

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "epr/grid.hpp"
#include "epr/params.hpp"

namespace epr {

struct FieldState {
  std::vector<double> phi_r;            // per cell, >= 0
  std::vector<double> phi;              // per cell
  std::vector<double> cumulative_mass;  // per edge, int_0^r rho s^{N-1} ds
  /// Density reaches the last cell, so the exterior anchor is not exact.
  bool anchor_inside_support = false;
};

/// Running integral of rho s^{N-1} at every edge; entry 0 is zero.
inline std::vector<double> cumulative_moment(std::span<const double> rho, const RadialGrid& grid) {
  grid.check_size(rho.size(), "cumulative_moment");
  const int n = grid.dimension();
  const auto edges = grid.edges();
  std::vector<double> moment(grid.size() + 1, 0.0);
  double prev_pow = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double next_pow = std::pow(edges[i + 1], n);
    moment[i + 1] = moment[i] + rho[i] * (next_pow - prev_pow) / n;
    prev_pow = next_pow;
  }
  return moment;
}

inline std::vector<double> force_field(std::span<const double> rho, const RadialGrid& grid,
                                       const PhysicsParams& params) {
  const auto moment = cumulative_moment(rho, grid);
  const int n = grid.dimension();
  const auto edges = grid.edges();
  const auto centers = grid.centers();
  std::vector<double> phi_r(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rc = centers[i];
    // rho is constant on the cell, so the moment at the centre is exact.
    const double m = moment[i] + rho[i] * (std::pow(rc, n) - std::pow(edges[i], n)) / n;
    phi_r[i] = params.alpha_N() * m / std::pow(rc, n - 1);
  }
  return phi_r;
}

/// Exterior value of Phi at radius r for total mass `mass`, matching the
/// convolution with the Green kernel (Phi -> 0 at infinity for N >= 3).
inline double exterior_potential(double r, double mass, const PhysicsParams& params) {
  const int n = params.N();
  const double s = unit_sphere_area(n);
  if (n == 2) return params.alpha_N() * mass / s * std::log(r);
  return -params.alpha_N() * mass / ((n - 2) * s * std::pow(r, n - 2));
}

inline std::vector<double> potential(std::span<const double> phi_r, std::span<const double> rho,
                                     const RadialGrid& grid, const PhysicsParams& params,
                                     bool* anchor_inside_support = nullptr) {
  grid.check_size(phi_r.size(), "potential");
  grid.check_size(rho.size(), "potential");
  const int n = grid.dimension();
  const auto volumes = grid.volumes();
  const auto centers = grid.centers();
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) mass += rho[i] * volumes[i];
  if (anchor_inside_support) *anchor_inside_support = rho.back() > 0.0;

  const double r_max = grid.r_max();
  const double phi_r_outer = params.alpha_N() * mass / unit_sphere_area(n) / std::pow(r_max, n - 1);
  std::vector<double> phi(grid.size());
  const std::size_t last = grid.size() - 1;
  phi[last] = exterior_potential(r_max, mass, params) -
              0.5 * (phi_r[last] + phi_r_outer) * (r_max - centers[last]);
  for (std::size_t k = last; k-- > 0;)
    phi[k] = phi[k + 1] - 0.5 * (phi_r[k] + phi_r[k + 1]) * (centers[k + 1] - centers[k]);
  return phi;
}

inline FieldState solve_field(std::span<const double> rho, const RadialGrid& grid,
                              const PhysicsParams& params) {
  FieldState field;
  field.cumulative_mass = cumulative_moment(rho, grid);
  field.phi_r = force_field(rho, grid, params);
  field.phi = potential(field.phi_r, rho, grid, params, &field.anchor_inside_support);
  return field;
}

/// Field of a system with the self-interaction switched off.
inline FieldState zero_field(const RadialGrid& grid) {
  FieldState field;
  field.phi_r.assign(grid.size(), 0.0);
  field.phi.assign(grid.size(), 0.0);
  field.cumulative_mass.assign(grid.size() + 1, 0.0);
  return field;
}

}  // namespace epr
