#pragma once

// Physical constants of the repulsive Euler-Poisson system: the dimensional
// coupling alpha(N), the Green kernel of the Laplacian and the gamma-law
// pressure closure.

#include <cmath>
#include <numbers>
#include <string>

#include "epr/errors.hpp"

namespace epr {

/// Volume of the unit ball in R^n, by the recurrence V(n) = 2*pi/n * V(n-2).
inline double unit_ball_volume(int n) {
  if (n < 0) throw DomainError("unit_ball_volume: dimension must be >= 0");
  double v = (n % 2 == 0) ? 1.0 : 2.0;
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) v *= 2.0 * std::numbers::pi / k;
  return v;
}

/// Surface measure of the unit sphere S^{n-1}.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

/// Coupling constant in Laplace(Phi) = alpha(N) rho.
inline double alpha(int n) {
  if (n <= 0) throw DomainError("alpha: dimension must be >= 1");
  if (n == 1) return 2.0;
  if (n == 2) return 2.0 * std::numbers::pi;
  return n * (n - 2) * unit_ball_volume(n);
}

/// Green kernel G(|x|) whose convolution with rho solves the Poisson equation.
inline double green(double distance, int n) {
  if (n <= 0) throw DomainError("green: dimension must be >= 1");
  if (!(distance > 0.0)) throw DomainError("green: distance must be > 0");
  if (n == 1) return distance;
  if (n == 2) return std::log(distance);
  return -std::pow(distance, -(n - 2));
}

/// (N, gamma, K, beta) with the cached alpha(N).
class PhysicsParams {
 public:
  PhysicsParams() : PhysicsParams(3, 5.0 / 3.0, 3.0 / 5.0, 0.0) {}

  PhysicsParams(int dimension, double gamma, double K, double beta)
      : dimension_(dimension), gamma_(gamma), K_(K), beta_(beta) {
    if (dimension < 2) throw DomainError("N >= 2 required (got " + std::to_string(dimension) + ")");
    if (!(gamma >= 1.0)) throw DomainError("gamma >= 1 required (got " + std::to_string(gamma) + ")");
    if (!(K >= 0.0)) throw DomainError("K >= 0 required (got " + std::to_string(K) + ")");
    if (!(beta >= 0.0)) throw DomainError("beta >= 0 required (got " + std::to_string(beta) + ")");
    alpha_ = alpha(dimension);
  }

  /// Default closure K = 1/gamma.
  static PhysicsParams with_default_K(int dimension, double gamma, double beta = 0.0) {
    return {dimension, gamma, 1.0 / gamma, beta};
  }

  int N() const { return dimension_; }
  double gamma() const { return gamma_; }
  double K() const { return K_; }
  double beta() const { return beta_; }
  double alpha_N() const { return alpha_; }
  bool pressureless() const { return K_ == 0.0; }

 private:
  int dimension_;
  double gamma_;
  double K_;
  double beta_;
  double alpha_;
};

inline double pressure(double rho, const PhysicsParams& p) {
  if (rho < 0.0) throw DomainError("pressure: rho must be >= 0");
  if (p.pressureless()) return 0.0;
  return p.K() * std::pow(rho, p.gamma());
}

/// sqrt(dP/drho).
inline double sound_speed(double rho, const PhysicsParams& p) {
  if (rho < 0.0) throw DomainError("sound_speed: rho must be >= 0");
  if (p.pressureless()) return 0.0;
  return std::sqrt(p.K() * p.gamma() * std::pow(rho, p.gamma() - 1.0));
}

}  // namespace epr
