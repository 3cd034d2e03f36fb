#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "hetsim/network.hpp"

namespace hetsim {

/// K types with sizes uniform in [max(1, N/2), N]; one relation for every
/// unordered pair of types, each with exactly 2 * min(|t_i|, |t_j|) distinct
/// edges sampled uniformly without replacement.
struct RandomNetworkSpec {
  int classes = 3;  ///< K
  Index max_size = 10;  ///< N
  std::uint64_t seed = 0;

  void validate() const;
};

/// Throws std::invalid_argument when the spec is invalid or a relation cannot
/// hold the requested number of distinct edges.
HeteroNetwork random_network(const RandomNetworkSpec& spec);

using Point = std::array<double, 2>;

/// Points of each layer, all in [0, 1]^2.
struct PointCloud {
  std::vector<std::vector<Point>> layers;
};

struct LayeredGraphSpec {
  std::vector<Index> counts;  ///< points per layer, at least two layers
  double radius = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Uniform points per layer; relation r_k links point i of layer k with point
/// j of layer k-1 whenever their distance is below the radius.
std::pair<HeteroNetwork, PointCloud> layered_points_graph(const LayeredGraphSpec& spec);

/// Same construction over given points.
HeteroNetwork layered_graph_from_points(const PointCloud& points, double radius);

/// S_ab = -‖p_a - p_b‖.
Eigen::MatrixXd geometric_ground_truth(const std::vector<Point>& points);

/// Network with the Book/Author/Year/Publisher schema and the given sizes.
/// Every book has one author, one year and one publisher; authors keep a
/// small set of publishers and a contiguous window of active years, so the
/// network carries genuine structure. Year ids are calendar years from 1940.
struct BookShapedSpec {
  Index books = 3625;
  Index authors = 99;
  Index years = 65;
  Index publishers = 554;
  std::uint64_t seed = 0;
};

HeteroNetwork book_shaped_network(const BookShapedSpec& spec);

}  // namespace hetsim
