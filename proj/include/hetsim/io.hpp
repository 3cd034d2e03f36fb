#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetsim/dense.hpp"
#include "hetsim/lowrank.hpp"
#include "hetsim/network.hpp"
#include "hetsim/operators.hpp"
#include "hetsim/synth.hpp"

namespace hetsim {

/// A file that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed content; the message carries file and line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A network on disk: schema.json plus one entity CSV per type and one edge
/// CSV per relation, optionally with explicit weights.
struct NetworkBundle {
  HeteroNetwork network;
  std::optional<WeightMatrix> weights;
};

/// `path` is the bundle directory or its schema.json. Index order is file
/// order.
NetworkBundle load_bundle(const std::filesystem::path& path);
HeteroNetwork load_network(const std::filesystem::path& path);

/// Writes schema.json, entities/*.csv and relations/*.csv under `dir`.
void save_network(const HeteroNetwork& network, const std::filesystem::path& dir,
                  const WeightMatrix* weights = nullptr);

/// Similarity of one type with entity ids attached.
struct SimilarityBlock {
  std::string type;
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
};

std::vector<SimilarityBlock> label_similarity(const HeteroNetwork& network,
                                              const SimilaritySet& similarity);

/// CSV `type,row_id,col_id,value`, upper triangle including the diagonal,
/// row-major, 17 significant digits.
void save_similarity(const std::vector<SimilarityBlock>& blocks,
                     const std::filesystem::path& path);
std::vector<SimilarityBlock> load_similarity(const std::filesystem::path& path);

struct FactorBlock {
  std::string type;
  std::vector<std::string> ids;
  FactoredSimilarity factors;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
};

std::vector<FactorBlock> label_factors(const HeteroNetwork& network, const FactoredSet& factors,
                                       std::uint64_t seed, std::uint64_t iterations);

/// CSV `type,entry,row,col,value` with entries rank, seed, iterations, id
/// (one per entity, in index order), d (per component) and U (row-major).
void save_factors(const std::vector<FactorBlock>& blocks, const std::filesystem::path& path);
std::vector<FactorBlock> load_factors(const std::filesystem::path& path);

/// CSV `iteration,residual,seconds`, iterations counted from 1.
void save_trace(const SolveTrace& trace, const std::filesystem::path& path);

/// CSV `layer,x,y`.
void save_points(const PointCloud& points, const std::filesystem::path& path);
PointCloud load_points(const std::filesystem::path& path);

/// SVG heatmap, one unit square per entry in row/column index order. Colour
/// is a linear ramp from white (#ffffff, minimum) to dark blue (#08306b,
/// maximum); a constant matrix is drawn in the minimum colour.
void export_heatmap(const Eigen::MatrixXd& matrix, const std::filesystem::path& path);

/// `%.17g`: round-trips every double.
std::string format_double(double v);

}  // namespace hetsim
