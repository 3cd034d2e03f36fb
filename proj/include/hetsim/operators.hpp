#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <compare>
#include <map>
#include <vector>

#include "hetsim/network.hpp"

namespace hetsim {

/// Compressed sparse column storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

enum class Direction {
  forward,  ///< |src| x |dst|; column c holds the src-neighbours of dst entity c
  reverse,  ///< |dst| x |src|; column a holds the dst-neighbours of src entity a
};

/// Degree-normalized adjacency of one relation. Every column either sums to 1
/// or is entirely zero (an entity with no edges in this relation).
struct StochasticOperator {
  std::size_t relation;
  Direction direction;
  SparseMatrix values;
};

StochasticOperator column_stochastic(const HeteroNetwork& network, std::size_t relation,
                                     Direction direction);

/// Weight of relation `relation` in the update of `type`, whose partner on the
/// other side of the relation is `partner`.
struct WeightKey {
  std::size_t type;
  std::size_t partner;
  std::size_t relation;
  auto operator<=>(const WeightKey&) const = default;
};

class WeightMatrix {
 public:
  void set(const WeightKey& key, double w) { entries_[key] = w; }
  double get(const WeightKey& key) const;
  bool contains(const WeightKey& key) const { return entries_.count(key) != 0; }
  /// Sum of the weights of every relation incident to `type`.
  double incident_sum(std::size_t type) const;
  const std::map<WeightKey, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::map<WeightKey, double> entries_;
};

/// Every relation incident to t (self relations counted once) gets
/// 1 / (number of relations incident to t).
WeightMatrix default_weights(const HeteroNetwork& network);

/// The weight keys a network admits: (src, dst, r) and (dst, src, r) for a
/// relation between distinct types, (t, t, r) for a self relation.
std::vector<WeightKey> admissible_weight_keys(const HeteroNetwork& network);

struct ColumnViolation {
  std::size_t relation;
  Direction direction;
  Index column;
  double sum;
};

struct TypeWeightViolation {
  std::size_t type;
  double sum;
};

struct ConditionReport {
  std::vector<ColumnViolation> non_stochastic_columns;
  std::vector<TypeWeightViolation> overweight_types;
  std::vector<WeightKey> negative_weights;
  std::vector<WeightKey> unknown_weights;
  /// Per type: sum over incident relations of w * ||W||_1^2.
  std::vector<double> lyapunov_bound;

  bool ok() const {
    return non_stochastic_columns.empty() && overweight_types.empty() &&
           negative_weights.empty() && unknown_weights.empty();
  }
};

ConditionReport check_convergence_conditions(const HeteroNetwork& network,
                                             const WeightMatrix& weights);

/// One term of a type's update: the type's block receives
/// weight * Wᵀ S_partner W, where W (|partner| x |type|) is column-stochastic
/// with columns indexed by the updated type, so each entity averages over its
/// neighbours in the partner type.
struct Coupling {
  std::size_t partner;
  std::size_t relation;
  double weight;
  SparseMatrix op;         ///< |partner| x |type|
  SparseMatrix op_t;       ///< transpose, |type| x |partner|
};

/// The coupled system for a network and a weight choice. A relation between
/// distinct types drives both endpoint types; a self relation drives its type
/// once, through in-neighbours (the forward operator), which makes a one-type
/// network reduce to classical SimRank.
class CouplingPlan {
 public:
  /// Throws std::invalid_argument when a weight key does not match a relation
  /// incident to the stated types.
  CouplingPlan(const HeteroNetwork& network, const WeightMatrix& weights);

  std::size_t num_types() const { return sizes_.size(); }
  Index size(std::size_t t) const { return sizes_[t]; }
  const std::vector<Index>& sizes() const { return sizes_; }
  const std::vector<Coupling>& couplings(std::size_t t) const { return couplings_[t]; }

 private:
  std::vector<Index> sizes_;
  std::vector<std::vector<Coupling>> couplings_;
};

/// Induced 1-norm: maximum absolute column sum.
double norm1(const SparseMatrix& m);

}  // namespace hetsim
