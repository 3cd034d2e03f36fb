#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "hetsim/dense.hpp"
#include "hetsim/operators.hpp"
#include "hetsim/randomized_eig.hpp"

namespace hetsim {

/// S ≈ I + U diag(d) Uᵀ, U with orthonormal columns. Rank 0 is the identity.
struct FactoredSimilarity {
  Eigen::MatrixXd basis;   ///< |t| x rank
  Eigen::VectorXd values;  ///< rank

  static FactoredSimilarity identity(Index n);
  Index dim() const { return basis.rows(); }
  Index rank() const { return basis.cols(); }
  Eigen::MatrixXd to_dense() const;
  /// max_a |S_aa - 1|; the projection does not pin the diagonal.
  double diagonal_drift() const;
};

using FactoredSet = std::vector<FactoredSimilarity>;

/// Matrix-free x -> sum_c w_c W_cᵀ (I + U_p D_p U_pᵀ) W_c x for one type,
/// optionally minus its own diagonal. Self-adjoint by construction.
class UpdateOperator final : public SymmetricOperator {
 public:
  UpdateOperator(const CouplingPlan& plan, std::size_t type, const FactoredSet& state,
                 bool remove_diagonal = true);

  Index dim() const override { return n_; }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const override;

  /// Exact diagonal of the coupling sum (before removal).
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  /// Sparse entries read by apply() so far, per vector of the input block.
  std::uint64_t edge_visits() const { return edge_visits_; }
  bool empty() const { return couplings_.empty(); }

 private:
  Index n_;
  const std::vector<Coupling>& couplings_;
  const FactoredSet& state_;
  bool remove_diagonal_;
  Eigen::VectorXd diagonal_;
  mutable std::uint64_t edge_visits_ = 0;
};

struct LowRankConfig {
  /// Target rank per type; clamped to the type size.
  std::vector<Index> ranks;
  /// Reduced per type so that rank + oversampling never exceeds the size.
  Index oversampling = 10;
  int power_iterations = 2;
  std::uint64_t seed = 0;

  void validate(std::size_t num_types) const;
};

/// One Jacobi sweep on factored states: for each type the update operator,
/// with its diagonal removed, is projected to the target rank. The stream for
/// (iteration, type) is derived from the seed, so results do not depend on
/// the thread count.
FactoredSet sweep_lowrank(const CouplingPlan& plan, const FactoredSet& state,
                          const LowRankConfig& config, std::uint64_t iteration,
                          int threads = 1);

/// ‖(I + U'D'U'ᵀ) - (I + UDUᵀ)‖_F without forming |t| x |t| matrices.
double factored_residual(const FactoredSimilarity& prev, const FactoredSimilarity& next);

struct LowRankSolution {
  FactoredSet factors;
  SolveTrace trace;
};

/// Iterates sweep_lowrank from S = I. Throws ConditionError like solve_dense
/// and DivergenceError on non-finite factors.
LowRankSolution solve_lowrank(const HeteroNetwork& network, const WeightMatrix& weights,
                              const SolverConfig& solver, const LowRankConfig& config);

/// δ_ab + U_a diag(d) U_bᵀ. Throws std::out_of_range on bad indices.
double similarity_query(const FactoredSimilarity& state, Index a, Index b);

struct Neighbor {
  Index index;
  double score;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The k entities most similar to a (a excluded), by decreasing score with
/// ties broken by increasing index. k larger than |t| - 1 is clamped.
std::vector<Neighbor> top_k(const FactoredSimilarity& state, Index a, Index k);
std::vector<Neighbor> top_k(const Eigen::MatrixXd& similarity, Index a, Index k);

}  // namespace hetsim
