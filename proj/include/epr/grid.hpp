#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "epr/errors.hpp"
#include "epr/params.hpp"

namespace epr {

/// Uniform cell-centred radial mesh on [0, r_max] carrying the N-dimensional
/// shell volumes of each cell. Volumes include the unit-sphere measure, so
/// sum(rho * volume) is the physical mass in R^N.
class RadialGrid {
 public:
  RadialGrid(int n_cells, double r_max, int dimension)
      : n_(n_cells), r_max_(r_max), dim_(dimension) {
    if (n_cells < 8) throw ContractError("RadialGrid: n_cells >= 8 required");
    if (!(r_max > 0.0)) throw ContractError("RadialGrid: r_max > 0 required");
    if (dimension < 1) throw ContractError("RadialGrid: dimension >= 1 required");
    dr_ = r_max / n_cells;
    const double ball = unit_ball_volume(dimension);
    const double sphere = unit_sphere_area(dimension);
    edges_.resize(n_ + 1);
    areas_.resize(n_ + 1);
    for (int i = 0; i <= n_; ++i) {
      edges_[i] = (i == n_) ? r_max : i * dr_;
      areas_[i] = sphere * std::pow(edges_[i], dim_ - 1);
    }
    centers_.resize(n_);
    volumes_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      centers_[i] = 0.5 * (edges_[i] + edges_[i + 1]);
      volumes_[i] = ball * (std::pow(edges_[i + 1], dim_) - std::pow(edges_[i], dim_));
    }
  }

  std::size_t size() const { return static_cast<std::size_t>(n_); }
  int n_cells() const { return n_; }
  double r_max() const { return r_max_; }
  double dr() const { return dr_; }
  int dimension() const { return dim_; }

  std::span<const double> edges() const { return edges_; }
  std::span<const double> centers() const { return centers_; }
  std::span<const double> volumes() const { return volumes_; }
  /// Surface measure S_N r^{N-1} of each edge.
  std::span<const double> edge_areas() const { return areas_; }

  void check_size(std::size_t n, const char* what) const {
    if (n != size())
      throw ContractError(std::string(what) + ": length " + std::to_string(n) +
                          " does not match grid of " + std::to_string(n_) + " cells");
  }

 private:
  int n_;
  double r_max_;
  int dim_;
  double dr_;
  std::vector<double> edges_;
  std::vector<double> areas_;
  std::vector<double> centers_;
  std::vector<double> volumes_;
};

}  // namespace epr
