#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "hetsim/network.hpp"
#include "hetsim/operators.hpp"

namespace hetsim {

class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One dense symmetric similarity block per type.
struct SimilaritySet {
  std::vector<Eigen::MatrixXd> blocks;

  static SimilaritySet identity(const std::vector<Index>& sizes);
  static SimilaritySet identity(const HeteroNetwork& network);
  std::size_t size() const { return blocks.size(); }
};

struct SolverConfig {
  double tol = 1e-9;
  int max_iter = 100;
  /// Damping c of the Lyapunov variant; unused by solve_dense.
  double damping = 0.8;
  /// Run even when the convergence conditions (or the contraction bound) fail.
  bool skip_condition_check = false;
  int threads = 1;

  void validate(bool uses_damping) const;
};

struct SolveTrace {
  std::vector<double> residuals;               ///< sum over types, per iteration
  std::vector<std::vector<double>> per_type;   ///< per iteration, per type
  std::vector<double> seconds;                 ///< wall time of each iteration
  bool converged = false;

  std::size_t iterations() const { return residuals.size(); }
};

struct DenseSolution {
  SimilaritySet similarity;
  SolveTrace trace;
};

/// Frobenius norm of the difference, per type.
std::vector<double> residual_per_type(const SimilaritySet& prev, const SimilaritySet& next);

/// Sum over types of the Frobenius norm of the difference.
double residual(const SimilaritySet& prev, const SimilaritySet& next);

/// One Jacobi sweep: every block is rebuilt from the previous state only,
/// S_t <- sum_c w_c W_cᵀ S_p W_c, then its diagonal is reset to exactly 1.
SimilaritySet sweep(const CouplingPlan& plan, const SimilaritySet& state, int threads = 1);
SimilaritySet sweep(const HeteroNetwork& network, const WeightMatrix& weights,
                    const SimilaritySet& state);

/// The coupling sum without diagonal treatment: sum_c w_c W_cᵀ S_p W_c.
SimilaritySet coupling_sum(const CouplingPlan& plan, const SimilaritySet& state,
                           int threads = 1);

/// Fixed-point iteration from S = I until the summed residual drops to tol or
/// max_iter is reached (trace.converged tells which). Throws ConditionError
/// when the convergence conditions fail and DivergenceError on non-finite
/// values.
DenseSolution solve_dense(const HeteroNetwork& network, const WeightMatrix& weights,
                          const SolverConfig& config);

/// Damped linear iteration S <- c sum_c w W S Wᵀ + (1 - c) I from S = I.
/// The diagonal is not reset. Refuses (ConditionError) when
/// c * sum w ||W||_1^2 > 1 for some type unless the check is skipped.
DenseSolution solve_lyapunov(const HeteroNetwork& network, const WeightMatrix& weights,
                             const SolverConfig& config);

/// Classical SimRank on a self relation, using in-neighbour sets:
/// s(a,b) = C / (|I(a)||I(b)|) sum_{v in I(a), u in I(b)} s(v,u) for a != b,
/// s(a,a) = 1, s(a,b) = 0 when either in-neighbour set is empty.
Eigen::MatrixXd classical_simrank(const HeteroNetwork& network, std::size_t relation,
                                  double decay, int iterations);

}  // namespace hetsim
