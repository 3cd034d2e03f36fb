#pragma once

#include <cstdint>
#include <vector>

#include "hetsim/dense.hpp"
#include "hetsim/lowrank.hpp"
#include "hetsim/synth.hpp"

namespace hetsim {

enum class SolverKind { dense, lowrank, lyapunov };

/// Radius sweep over layered point graphs. Each trial draws one point cloud
/// and rebuilds the graph at every radius, so trials are paired across radii.
struct RadiusSweepSpec {
  std::vector<Index> counts{40, 40, 40};
  std::vector<double> radii;
  int trials = 20;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::dense;
  SolverConfig solver_config;
  Index rank = 10;  ///< per-type rank for the low-rank solver, clamped to the layer size
  Index oversampling = 10;
  int power_iterations = 2;
};

struct RadiusSweepResult {
  std::vector<double> radii;
  /// quality[i][trial][layer]
  std::vector<std::vector<std::vector<double>>> quality;

  /// Mean over trials of the layer-0 quality at radius i.
  double mean(std::size_t i, std::size_t layer = 0) const;
};

/// Runs the solver for a fixed number of sweeps (non-convergence is not an
/// error here) and scores each layer against its geometric ground truth.
std::vector<double> layer_quality(const HeteroNetwork& network, const PointCloud& cloud,
                                  const RadiusSweepSpec& spec, std::uint64_t seed);

RadiusSweepResult radius_sweep(const RadiusSweepSpec& spec);

/// Inclusive arithmetic range r0, r0+step, ... up to r1 (with 1e-9 slack).
std::vector<double> radius_range(double r0, double r1, double step);

}  // namespace hetsim
