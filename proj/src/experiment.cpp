#include "hetsim/experiment.hpp"

#include <stdexcept>

#include "hetsim/quality.hpp"
#include "hetsim/randomized_eig.hpp"

namespace hetsim {

double RadiusSweepResult::mean(std::size_t i, std::size_t layer) const {
  const auto& trials = quality.at(i);
  if (trials.empty()) return 0.0;
  double s = 0.0;
  for (const auto& per_layer : trials) s += per_layer.at(layer);
  return s / static_cast<double>(trials.size());
}

std::vector<double> layer_quality(const HeteroNetwork& network, const PointCloud& cloud,
                                  const RadiusSweepSpec& spec, std::uint64_t seed) {
  const auto weights = default_weights(network);
  SimilaritySet sim;
  switch (spec.solver) {
    case SolverKind::dense:
      sim = solve_dense(network, weights, spec.solver_config).similarity;
      break;
    case SolverKind::lyapunov:
      sim = solve_lyapunov(network, weights, spec.solver_config).similarity;
      break;
    case SolverKind::lowrank: {
      LowRankConfig cfg;
      for (const auto& t : network.types()) cfg.ranks.push_back(std::min(spec.rank, t.size()));
      cfg.oversampling = spec.oversampling;
      cfg.power_iterations = spec.power_iterations;
      cfg.seed = seed;
      const auto sol = solve_lowrank(network, weights, spec.solver_config, cfg);
      for (const auto& f : sol.factors) sim.blocks.push_back(f.to_dense());
      break;
    }
  }
  std::vector<double> q;
  for (std::size_t k = 0; k < cloud.layers.size(); ++k) {
    q.push_back(ordering_quality(geometric_ground_truth(cloud.layers[k]), sim.blocks[k]));
  }
  return q;
}

RadiusSweepResult radius_sweep(const RadiusSweepSpec& spec) {
  if (spec.radii.empty()) throw std::invalid_argument("radius sweep needs at least one radius");
  if (spec.trials < 1) throw std::invalid_argument("radius sweep needs at least one trial");
  RadiusSweepResult out;
  out.radii = spec.radii;
  out.quality.assign(spec.radii.size(), {});
  for (int trial = 0; trial < spec.trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial), 0);
    const auto cloud = layered_points_graph({spec.counts, spec.radii.front(), trial_seed}).second;
    for (std::size_t i = 0; i < spec.radii.size(); ++i) {
      const auto net = layered_graph_from_points(cloud, spec.radii[i]);
      out.quality[i].push_back(layer_quality(net, cloud, spec, derive_seed(trial_seed, i, 1)));
    }
  }
  return out;
}

std::vector<double> radius_range(double r0, double r1, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (!(r0 > 0.0) || r1 < r0) throw std::invalid_argument("sweep range must satisfy 0 < r0 <= r1");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double r = r0 + step * i;
    if (r > r1 + 1e-9) break;
    out.push_back(r);
  }
  return out;
}

}  // namespace hetsim
