#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "epr/solver.hpp"

namespace epr::test {

inline constexpr double pi = std::numbers::pi;

// pi^{n/2} / Gamma(n/2 + 1), independent of the recurrence in params.hpp.
inline double ball_volume_gamma(int n) { return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

inline ScenarioConfig ball_config(int N, double K, double beta, int cells = 256, double r_max = 4.0,
                                  double rho0 = 1.0, double radius = 1.0) {
  ScenarioConfig c;
  c.params = PhysicsParams(N, N == 2 ? 2.0 : 5.0 / 3.0, K, beta);
  c.n_cells = cells;
  c.r_max = r_max;
  c.density = UniformBall{rho0, radius};
  return c;
}

inline std::vector<DiagnosticsRecord> collect(const ScenarioConfig& c, RunResult* result = nullptr) {
  std::vector<DiagnosticsRecord> series;
  auto r = run(c, [&](const DiagnosticsRecord& rec, const FluidState&) { series.push_back(rec); });
  if (result) *result = std::move(r);
  return series;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace epr::test
