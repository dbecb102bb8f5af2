#pragma once

// Boundary characteristic of a compactly supported pressureless state:
// the Emden ODE  R'' = M / R^{N-1},  the initial-velocity functional
// H0 = int_0^R V0 dr, and the blow-up time bound T = 2R/H0.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "epr/diagnostics.hpp"
#include "epr/errors.hpp"
#include "epr/params.hpp"
#include "epr/state.hpp"

namespace epr {

struct EmdenState {
  double R = 1.0;
  double Rdot = 0.0;
  double M = 0.0;
  int N = 3;
};

struct EmdenPoint {
  double t;
  double R;
  double Rdot;
};

inline double emden_rhs(const EmdenState& s) {
  if (!(s.R > 0.0)) throw DomainError("emden_rhs: R must be > 0");
  return s.M / std::pow(s.R, s.N - 1);
}

/// Emden mass that reproduces the discrete boundary force alpha(N) m(R) / R^{N-1}
/// when the solver's total mass is `mass`; equal to `mass` for N = 2 and N = 3.
inline double boundary_emden_mass(double mass, int n) {
  return alpha(n) / unit_sphere_area(n) * mass;
}

/// 1/2 Rdot^2 - M g(R), conserved along the Emden flow (g' = R^{1-N}).
inline double emden_first_integral(double R, double Rdot, double M, int n) {
  const double g = (n == 2) ? std::log(R) : std::pow(R, 2 - n) / (2 - n);
  return 0.5 * Rdot * Rdot - M * g;
}

namespace detail {

using EmdenVector = std::array<double, 2>;

struct EmdenSystem {
  double M;
  int N;
  void operator()(const EmdenVector& x, EmdenVector& dxdt, double /*t*/) const {
    dxdt[0] = x[1];
    dxdt[1] = emden_rhs({x[0], x[1], M, N});
  }
};

inline void check_initial(const EmdenState& s) {
  if (!(s.R > 0.0)) throw DomainError("integrate_emden: R0 must be > 0");
  if (!(s.M >= 0.0)) throw DomainError("integrate_emden: M must be >= 0");
  if (s.N < 2) throw DomainError("integrate_emden: N >= 2 required");
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration with dense output sampled at
/// `samples + 1` uniform times on [0, t_end].
inline std::vector<EmdenPoint> integrate_emden(const EmdenState& initial, double t_end, double tol,
                                               int samples = 200) {
  namespace odeint = boost::numeric::odeint;
  detail::check_initial(initial);
  if (!(t_end > 0.0)) throw ContractError("integrate_emden: t_end must be > 0");
  if (!(tol > 1e-12 && tol < 1e-2)) throw ContractError("integrate_emden: tol must lie in (1e-12, 1e-2)");
  if (samples < 1) throw ContractError("integrate_emden: samples >= 1 required");

  detail::EmdenVector x{initial.R, initial.Rdot};
  const detail::EmdenSystem system{initial.M, initial.N};
  // The local error control is tightened so the first integral stays within tol.
  auto stepper = odeint::make_dense_output(1e-2 * tol, 1e-2 * tol,
                                           odeint::runge_kutta_dopri5<detail::EmdenVector>());
  std::vector<EmdenPoint> trajectory;
  trajectory.reserve(samples + 1);
  const double dt_out = t_end / samples;
  odeint::integrate_n_steps(stepper, system, x, 0.0, dt_out, samples,
                            [&](const detail::EmdenVector& y, double t) {
                              trajectory.push_back({t, y[0], y[1]});
                            });
  trajectory.back().t = t_end;
  return trajectory;
}

/// Fixed-step Dormand-Prince integration, used for step-halving studies.
inline EmdenPoint integrate_emden_fixed(const EmdenState& initial, double t_end, int steps) {
  namespace odeint = boost::numeric::odeint;
  detail::check_initial(initial);
  if (steps < 1) throw ContractError("integrate_emden_fixed: steps >= 1 required");
  detail::EmdenVector x{initial.R, initial.Rdot};
  odeint::runge_kutta_dopri5<detail::EmdenVector> stepper;
  const double h = t_end / steps;
  odeint::integrate_n_steps(stepper, detail::EmdenSystem{initial.M, initial.N}, x, 0.0, h, steps);
  return {t_end, x[0], x[1]};
}

/// Radius of the Emden trajectory at time t, by linear interpolation.
inline double emden_radius_at(const std::vector<EmdenPoint>& trajectory, double t) {
  if (trajectory.empty()) throw ContractError("emden_radius_at: empty trajectory");
  if (t <= trajectory.front().t) return trajectory.front().R;
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    if (t <= trajectory[k].t) {
      const auto& a = trajectory[k - 1];
      const auto& b = trajectory[k];
      const double w = (t - a.t) / (b.t - a.t);
      return (1.0 - w) * a.R + w * b.R;
    }
  }
  return trajectory.back().R;
}

/// 2R/H0, or nothing when H0 <= 0 (the blow-up result needs H0 > 0).
inline std::optional<double> blowup_time(double R, double H0) {
  if (!(R > 0.0)) throw DomainError("blowup_time: R must be > 0");
  if (!(H0 > 0.0)) return std::nullopt;
  return 2.0 * R / H0;
}

/// int_0^R V dr over the support cells, each cell contributing V_i * dr
/// (plain line measure, not the volume measure).
inline double h0_functional(const FluidState& state) {
  const double R = support_radius(state);
  const auto centers = state.grid().centers();
  const double dr = state.grid().dr();
  double h0 = 0.0;
  for (std::size_t i = 0; i < state.rho.size() && centers[i] <= R; ++i) h0 += state.velocity[i] * dr;
  return R > 0.0 ? h0 : 0.0;
}

}  // namespace epr
