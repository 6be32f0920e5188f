#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "cohesive/potentials.hpp"

namespace cohesive {

/// Point (alpha, beta) in the opening/damage plane.
using PlanePoint = std::array<double, 2>;

/// Uniform grid on [0, s] x [0, 1]; the row beta = 1 is part of the grid.
struct GeodesicGrid {
  std::size_t n_alpha = 512;
  std::size_t n_beta = 512;
  int stencil = 16;  // 8 or 16 neighbors

  void validate() const;
  /// Both node counts scaled: n -> round((n - 1) * factor) + 1.
  GeodesicGrid refined(double factor) const;
};

/// Length of one straight segment in the metric (1 - beta)^2 (f^2 dalpha^2 + dbeta^2).
/// Horizontal and vertical segments are integrated exactly, oblique ones with
/// 8-point Gauss-Legendre. Segments that slide along a row where (1 - beta) f
/// is infinite cost +inf.
double segment_length(const PlanePoint& a, const PlanePoint& b, const DamagePotential& pot);

/// Sum of segment_length over consecutive vertices.
double metric_length(const std::vector<PlanePoint>& polyline, const DamagePotential& pot);

struct GeodesicResult {
  double value = 0.0;       // length of `path` (after polishing, if requested)
  double grid_value = 0.0;  // Dijkstra distance on the grid graph
  std::vector<PlanePoint> path;
  GeodesicGrid grid;
};

/// Shortest path from (0, 1) to (s, 1) on the grid graph with Dijkstra. With
/// `polish`, the interior vertices of the grid path are then moved off the
/// grid by local descent on metric_length, which removes the angular bias of
/// the finite stencil; value <= grid_value always.
GeodesicResult geodesic_g(const DamagePotential& pot, double s, const GeodesicGrid& grid,
                          bool polish = true);

/// Local descent on the interior vertices of a polyline (endpoints fixed,
/// vertices confined to [0, s] x [0, 1]). Returns the new length.
double polish_path(std::vector<PlanePoint>& path, const DamagePotential& pot, double s,
                   int max_sweeps = 400);

struct RefinementResult {
  double value = 0.0;
  bool stable = false;  // false: flagged, tolerance not reached within max refinements
  std::vector<double> values;
  std::vector<GeodesicGrid> grids;
  GeodesicResult last;
};

/// geodesic_g on start, start.refined(factor), ... until successive values
/// differ by < tol relative, or max_refinements refinements were made.
RefinementResult refine_until_stable(const DamagePotential& pot, double s,
                                     const GeodesicGrid& start, double factor = 1.5,
                                     double tol = 5e-3, int max_refinements = 5,
                                     bool polish = true);

/// CSV "alpha,beta" of the path vertices.
void write_path_csv(std::ostream& out, const std::vector<PlanePoint>& path);

}  // namespace cohesive
